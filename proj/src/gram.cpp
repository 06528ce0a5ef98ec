#include "specrkhs/gram.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "specrkhs/linalg.hpp"
#include "specrkhs/parallel.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs {

namespace {

constexpr char kMagic[16] = {'S', 'P', 'E', 'C', 'R', 'K', 'H', 'S', '-', 'G', 'R', 'A', 'M', '\0', '\0', '\0'};

std::vector<Point> rows_of(const Mat& M) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(M.rows()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(M.row(i).transpose());
    return out;
}

void check_points(const KernelSpec& k, const std::vector<Point>& pts) {
    for (const auto& p : pts) k.check_point(p);
}

void check_finite(const Mat& M, const char* name) {
    if (!M.allFinite()) throw NumericalError(std::string("build_gram: non-finite kernel values in ") + name);
}

// Hermitian matrix H_jk = f(k, j) from the lower triangle.
template <class F>
Mat hermitian_from(Eigen::Index n, const F& f) {
    Mat H(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
        const Eigen::Index k = static_cast<Eigen::Index>(kk);
        for (Eigen::Index j = k; j < n; ++j) H(j, k) = f(k, j);
    });
    for (Eigen::Index k = 0; k < n; ++k) {
        H(k, k) = H(k, k).real();
        for (Eigen::Index j = k + 1; j < n; ++j) H(k, j) = std::conj(H(j, k));
    }
    return H;
}

template <class F>
Mat general_from(Eigen::Index n, const F& f) {
    Mat M(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
        const Eigen::Index k = static_cast<Eigen::Index>(kk);
        for (Eigen::Index j = 0; j < n; ++j) M(j, k) = f(k, j);
    });
    return M;
}

std::vector<double> key_of(const Point& p) {
    std::vector<double> key;
    key.reserve(static_cast<std::size_t>(2 * p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        key.push_back(p(i).real());
        key.push_back(p(i).imag());
    }
    return key;
}

// Stochastic assembly for kernels of the form delta_xy w(x): only coincident states contribute.
void stochastic_diagonal(const SnapshotSet& s, const KernelSpec& kernel, const std::vector<Point>& xs, Mat& A,
                         Mat& R) {
    const Eigen::Index n = s.count();
    const int S = s.samples();
    std::map<std::vector<double>, Eigen::Index> x_index;
    for (Eigen::Index j = 0; j < n; ++j) x_index.emplace(key_of(xs[j]), j);

    // For each successor value: which columns k reached it and how often.
    std::map<std::vector<double>, std::vector<std::pair<Eigen::Index, double>>> hits;
    std::map<std::vector<double>, double> weight;
    for (Eigen::Index k = 0; k < n; ++k) {
        std::map<std::vector<double>, double> counts;
        for (int b = 0; b < S; ++b) {
            Point y = s.y(k, b);
            kernel.check_point(y);
            auto key = key_of(y);
            counts[key] += 1.0;
            if (!weight.count(key)) weight[key] = kernel.diagonal_weight(y);
        }
        for (auto& [key, c] : counts) hits[key].emplace_back(k, c);
    }
    A = Mat::Zero(n, n);
    R = Mat::Zero(n, n);
    const double inv_s = 1.0 / S;
    for (const auto& [key, list] : hits) {
        const double w = weight[key];
        auto it = x_index.find(key);
        for (auto [k, ck] : list) {
            if (it != x_index.end()) A(it->second, k) += ck * inv_s * w;
            for (auto [j, cj] : list) R(j, k) += ck * cj * inv_s * inv_s * w;
        }
    }
}

} // namespace

GramTriple build_gram(const SnapshotSet& s, const KernelSpec& kernel) {
    s.validate();
    const Eigen::Index n = s.count();
    const int S = s.samples();
    auto xs = rows_of(s.X);
    check_points(kernel, xs);

    GramTriple g;
    g.G = hermitian_from(n, [&](Eigen::Index k, Eigen::Index j) { return kernel.eval_unchecked(xs[k], xs[j]); });

    if (S == 1) {
        auto ys = rows_of(s.Y[0]);
        check_points(kernel, ys);
        g.A = general_from(n, [&](Eigen::Index k, Eigen::Index j) { return kernel.eval_unchecked(ys[k], xs[j]); });
        g.R = hermitian_from(n, [&](Eigen::Index k, Eigen::Index j) { return kernel.eval_unchecked(ys[k], ys[j]); });
    } else if (kernel.is_diagonal()) {
        stochastic_diagonal(s, kernel, xs, g.A, g.R);
    } else {
        std::vector<std::vector<Point>> ys;
        for (int b = 0; b < S; ++b) {
            ys.push_back(rows_of(s.Y[b]));
            check_points(kernel, ys.back());
        }
        const double inv_s = 1.0 / S;
        g.A = general_from(n, [&](Eigen::Index k, Eigen::Index j) {
            cplx acc = 0.0;
            for (int b = 0; b < S; ++b) acc += kernel.eval_unchecked(ys[b][k], xs[j]);
            return acc * inv_s;
        });
        g.R = hermitian_from(n, [&](Eigen::Index k, Eigen::Index j) {
            cplx acc = 0.0;
            for (int b = 0; b < S; ++b)
                for (int b2 = 0; b2 < S; ++b2) acc += kernel.eval_unchecked(ys[b][k], ys[b2][j]);
            return acc * inv_s * inv_s;
        });
    }
    check_finite(g.G, "G");
    check_finite(g.A, "A");
    check_finite(g.R, "R");

    nlohmann::json prov = {{"kernel", kernel.to_string()},
                           {"snapshot_hash", hex64(s.hash())},
                           {"N", n},
                           {"samples", S},
                           {"path", S == 1 ? "snapshots" : "stochastic-average"}};
    g.provenance = prov.dump();
    return g;
}

GramTriple build_gram_exact_chain(const SystemSpec& chain, const std::vector<long long>& states,
                                  const KernelSpec& kernel) {
    if (!chain.stochastic()) throw InvalidInput("build_gram_exact_chain: system is not a Markov chain");
    if (states.empty()) throw InvalidInput("build_gram_exact_chain: no states");
    const Eigen::Index n = static_cast<Eigen::Index>(states.size());
    auto as_point = [](long long v) {
        Point p(1);
        p(0) = static_cast<double>(v);
        return p;
    };
    std::vector<Point> xs;
    std::vector<std::vector<std::pair<Point, double>>> support(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        xs.push_back(as_point(states[i]));
        kernel.check_point(xs.back());
        for (auto [y, p] : transition_support(chain, states[i])) {
            support[i].emplace_back(as_point(y), p);
            kernel.check_point(support[i].back().first);
        }
    }
    {
        Mat X(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) X(i, 0) = xs[i](0);
        SnapshotSet tmp;
        tmp.X = X;
        tmp.Y = {X};
        tmp.validate();
    }

    GramTriple g;
    g.G = hermitian_from(n, [&](Eigen::Index k, Eigen::Index j) { return kernel.eval_unchecked(xs[k], xs[j]); });
    g.A = general_from(n, [&](Eigen::Index k, Eigen::Index j) {
        cplx acc = 0.0;
        for (const auto& [y, p] : support[k]) acc += p * kernel.eval_unchecked(y, xs[j]);
        return acc;
    });
    g.R = hermitian_from(n, [&](Eigen::Index k, Eigen::Index j) {
        cplx acc = 0.0;
        for (const auto& [y, p] : support[k])
            for (const auto& [y2, p2] : support[j]) acc += p * p2 * kernel.eval_unchecked(y, y2);
        return acc;
    });

    std::uint64_t h = fnv1a(states.data(), states.size() * sizeof(long long));
    nlohmann::json prov = {{"kernel", kernel.to_string()},
                           {"system", chain.to_string()},
                           {"snapshot_hash", hex64(h)},
                           {"N", n},
                           {"path", "exact-transitions"}};
    g.provenance = prov.dump();
    return g;
}

// ---------------------------------------------------------------- compression

Mat CompressedBasis::W() const {
    Mat w = U;
    for (Eigen::Index j = 0; j < r; ++j) w.col(j) /= sigma(j);
    return w;
}

CompressedBasis compress(const GramTriple& gram, Eigen::Index r, double threshold) {
    const Eigen::Index n = gram.size();
    if (r < 1 || r > n) throw InvalidInput("compress: rank must satisfy 1 <= r <= N");
    HermitianEig e = eigh(gram.G);
    const double lmax = e.values(n - 1);
    Eigen::Index keep = 0;
    while (keep < n && lmax > 0.0 && e.values(n - 1 - keep) > threshold * lmax) ++keep;
    if (keep == 0) throw NumericalError("compress: threshold keeps no directions of G");
    keep = std::min(keep, r);

    CompressedBasis b;
    b.r = keep;
    b.U = e.vectors.rightCols(keep).rowwise().reverse();
    b.sigma = e.values.tail(keep).reverse().cwiseSqrt();
    Mat W = b.W();
    b.khat_t = multiply(W.adjoint(), multiply(gram.A, W));
    b.khat = b.khat_t.transpose();
    return b;
}

Vec to_u_basis(const Vec& c, const CompressedBasis& basis, const GramTriple& gram) {
    if (c.size() != gram.size()) throw InvalidInput("to_u_basis: coefficient vector has wrong length");
    Vec gc = multiply(gram.G, c);
    return basis.W().adjoint() * gc;
}

// ---------------------------------------------------------------- serialization

namespace {

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
    if (pos + 8 > in.size()) throw InvalidInput("gram file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    pos += 8;
    return v;
}

void put_f64(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(out, bits);
}

double get_f64(const std::string& in, std::size_t& pos) {
    std::uint64_t bits = get_u64(in, pos);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

} // namespace

std::string serialize_gram(const GramTriple& g) {
    const Eigen::Index n = g.size();
    if (g.A.rows() != n || g.R.rows() != n) throw InvalidInput("serialize_gram: inconsistent sizes");
    const bool complex_data = !g.real();
    std::string out(kMagic, kMagic + 16);
    put_u64(out, static_cast<std::uint64_t>(n));
    out.push_back(complex_data ? 1 : 0);
    for (const Mat* m : {&g.G, &g.A, &g.R}) {
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j) {
                put_f64(out, (*m)(j, k).real());
                if (complex_data) put_f64(out, (*m)(j, k).imag());
            }
    }
    out += g.provenance.empty() ? std::string("{}") : g.provenance;
    return out;
}

GramTriple deserialize_gram(const std::string& in) {
    if (in.size() < 25 || std::memcmp(in.data(), kMagic, 16) != 0) throw InvalidInput("not a gram file (bad magic)");
    std::size_t pos = 16;
    const std::uint64_t n64 = get_u64(in, pos);
    const unsigned char flag = static_cast<unsigned char>(in[pos++]);
    if (flag > 1) throw InvalidInput("gram file: unknown value-field flag");
    const bool complex_data = flag == 1;
    const std::uint64_t per = complex_data ? 2 : 1;
    if (n64 == 0 || n64 > (1u << 20) || 3 * n64 * n64 * per * 8 > in.size() - pos)
        throw InvalidInput("gram file truncated or has an invalid size");
    const Eigen::Index n = static_cast<Eigen::Index>(n64);
    GramTriple g;
    for (Mat* m : {&g.G, &g.A, &g.R}) {
        m->resize(n, n);
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j) {
                double re = get_f64(in, pos);
                double im = complex_data ? get_f64(in, pos) : 0.0;
                (*m)(j, k) = cplx(re, im);
            }
    }
    g.provenance = in.substr(pos);
    if (!nlohmann::json::accept(g.provenance)) throw InvalidInput("gram file: provenance trailer is not valid JSON");
    return g;
}

void save_gram(const std::string& path, const GramTriple& gram) { atomic_write_file(path, serialize_gram(gram)); }

GramTriple load_gram(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open gram file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_gram(buf.str());
}

} // namespace specrkhs
