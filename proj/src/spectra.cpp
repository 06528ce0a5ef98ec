#include "specrkhs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "specrkhs/linalg.hpp"
#include "specrkhs/parallel.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs {

namespace {

constexpr double kClampGate = 1e-12;
constexpr double kDegenerateFloor = 1e-15;

double max_diag(const Mat& G) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i) m = std::max(m, std::fabs(G(i, i).real()));
    return m;
}

// sqrt(num / gGg) with num = gRg - 2 Re(conj(lambda) gAg) + |lambda|^2 gGg, evaluated as
// (gRg - |gAg|^2 / gGg) + |gAg - lambda gGg|^2 / gGg.
double residual_from_forms(cplx lambda, double gRg, cplx gAg, double gGg, double floor) {
    if (!(gGg > floor)) throw NumericalError("residual: degenerate direction (g^*Gg below truncation floor)");
    const double l2 = std::norm(lambda);
    const double a = std::abs(gAg);
    const double num = (gRg - a * (a / gGg)) + std::norm(gAg - lambda * gGg) / gGg;
    const double scale = std::max(gGg, std::fabs(gRg) + 2.0 * std::abs(lambda) * a + l2 * gGg);
    if (num < -kClampGate * scale)
        throw NumericalError("residual: quadratic form is negative beyond round-off (" + format_double(num / gGg) +
                             "); the Gram triple is not consistent");
    return std::sqrt(std::max(0.0, num) / gGg);
}

void check_gram(const GramTriple& g) {
    const Eigen::Index n = g.size();
    if (n == 0 || g.G.cols() != n || g.A.rows() != n || g.A.cols() != n || g.R.rows() != n || g.R.cols() != n)
        throw InvalidInput("Gram triple has inconsistent dimensions");
}

// Rt - z At^* - conj(z) At + |z|^2 I, Hermitian by construction.
Mat shifted(const Mat& Rt, const Mat& At, cplx z) {
    Mat H = Rt - z * At.adjoint() - std::conj(z) * At;
    H.diagonal().array() += std::norm(z);
    return 0.5 * (H + H.adjoint());
}

Mat hermitian_part(const Mat& M) { return 0.5 * (M + M.adjoint()); }

} // namespace

double residual(cplx lambda, const Vec& g, const GramTriple& gram) {
    check_gram(gram);
    if (g.size() != gram.size()) throw InvalidInput("residual: coefficient vector has wrong length");
    const double floor = kDegenerateFloor * g.squaredNorm() * max_diag(gram.G);
    const double gGg = g.dot(gram.G * g).real();
    const double gRg = g.dot(gram.R * g).real();
    const cplx gAg = g.dot(gram.A * g);
    return residual_from_forms(lambda, gRg, gAg, gGg, floor);
}

std::vector<double> residuals(const Vec& lambdas, const Mat& coeffs, const GramTriple& gram) {
    check_gram(gram);
    if (coeffs.rows() != gram.size() || coeffs.cols() != lambdas.size())
        throw InvalidInput("residuals: coefficient matrix has wrong shape");
    Mat GV = multiply(gram.G, coeffs), AV = multiply(gram.A, coeffs), RV = multiply(gram.R, coeffs);
    const double md = max_diag(gram.G);
    std::vector<double> out(static_cast<std::size_t>(lambdas.size()));
    for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
        const auto g = coeffs.col(j);
        try {
            out[j] = residual_from_forms(lambdas(j), g.dot(RV.col(j)).real(), g.dot(AV.col(j)), g.dot(GV.col(j)).real(),
                                         kDegenerateFloor * g.squaredNorm() * md);
        } catch (const NumericalError&) {
            out[j] = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

std::vector<VerifiedEigenpair> verify_eigenpairs(const GramTriple& gram, double epsilon, double threshold,
                                                 Eigen::Index max_rank) {
    check_gram(gram);
    if (!(epsilon >= 0.0)) throw InvalidInput("verify_eigenpairs: epsilon must be non-negative");
    GeneralizedEigResult e = general_geig(gram.A, gram.G, threshold, max_rank);
    std::vector<double> res = residuals(e.eigenvalues, e.eigenvectors, gram);
    std::vector<VerifiedEigenpair> out;
    out.reserve(res.size());
    for (Eigen::Index j = 0; j < e.eigenvalues.size(); ++j)
        out.push_back({e.eigenvalues(j), e.eigenvectors.col(j), res[j], res[j] <= epsilon});
    std::stable_sort(out.begin(), out.end(),
                     [](const VerifiedEigenpair& a, const VerifiedEigenpair& b) { return a.residual < b.residual; });
    return out;
}

PseudospectrumResult pseudospectrum_pf(const GramTriple& gram, const std::vector<cplx>& grid, double epsilon,
                                       const PseudospectrumOptions& opts) {
    check_gram(gram);
    if (grid.empty()) throw InvalidInput("pseudospectrum: empty grid");
    PencilReduction red(gram.G, opts.threshold);
    const Mat Rt = hermitian_part(red.reduce(gram.R));
    const Mat At = red.reduce(gram.A);

    const std::size_t m = grid.size();
    PseudospectrumResult out;
    out.grid = grid;
    out.epsilon = epsilon;
    out.tau.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.errors.assign(m, std::string());
    std::vector<Vec> wit(m);
    // For real data tau(conj z) = tau(z) with the conjugate witness; solve each conjugate pair once.
    std::vector<std::size_t> mirror(m, m);
    if (gram.real()) {
        std::map<std::pair<double, double>, std::size_t> upper;
        for (std::size_t i = 0; i < m; ++i)
            if (grid[i].imag() > 0.0) upper.emplace(std::make_pair(grid[i].real(), grid[i].imag()), i);
        for (std::size_t i = 0; i < m; ++i) {
            if (!(grid[i].imag() < 0.0)) continue;
            auto it = upper.find({grid[i].real(), -grid[i].imag()});
            if (it != upper.end()) mirror[i] = it->second;
        }
    }
    std::vector<std::size_t> solve;
    for (std::size_t i = 0; i < m; ++i)
        if (mirror[i] == m) solve.push_back(i);
    parallel_for(solve.size(), [&](std::size_t k) {
        const std::size_t i = solve[k];
        try {
            auto [mu, v] = eigh_smallest(shifted(Rt, At, grid[i]));
            (void)mu;
            wit[i] = red.lift(v);
            out.tau[i] = residual(grid[i], wit[i], gram);
        } catch (const std::exception& ex) {
            out.errors[i] = ex.what();
        }
    });
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = mirror[i];
        if (j == m) continue;
        if (!out.errors[j].empty()) {
            out.errors[i] = out.errors[j];
            continue;
        }
        wit[i] = wit[j].conjugate();
        out.tau[i] = residual(grid[i], wit[i], gram);
    }
    if (opts.store_witnesses) out.witnesses.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::isfinite(out.tau[i]) && out.tau[i] < epsilon) {
            out.flagged.push_back(i);
            if (opts.store_witnesses) out.witnesses[i] = std::move(wit[i]);
        }
    }
    return out;
}

std::vector<cplx> default_grid(int N) {
    if (N < 1) throw InvalidInput("default_grid: N must be >= 1");
    const long long n = N;
    const long long lim = n * n;
    const long long r2 = lim * lim;
    std::vector<cplx> out;
    for (long long a = -lim; a <= lim; ++a)
        for (long long b = -lim; b <= lim; ++b)
            if (a * a + b * b <= r2) out.emplace_back(static_cast<double>(a) / n, static_cast<double>(b) / n);
    return out;
}

double residual_compressed(cplx lambda, const Vec& g_tilde, const CompressedBasis& basis, const GramTriple& gram) {
    if (g_tilde.size() != basis.r) throw InvalidInput("residual_compressed: vector length differs from rank");
    return residual(lambda, basis.W() * g_tilde, gram);
}

PseudospectrumResult pseudospectrum_koop(const GramTriple& gram, Eigen::Index N1, Eigen::Index N2,
                                         const std::vector<cplx>& grid, double epsilon,
                                         const PseudospectrumOptions& opts) {
    check_gram(gram);
    if (grid.empty()) throw InvalidInput("pseudospectrum_koop: empty grid");
    if (N1 < 1 || N1 > gram.size()) throw InvalidInput("pseudospectrum_koop: N1 must be between 1 and N");
    if (N2 < 1 || N2 > N1) throw InvalidInput("pseudospectrum_koop: N2 must be between 1 and N1");

    const Mat G1 = gram.G.topLeftCorner(N1, N1);
    const Mat A1 = gram.A.topLeftCorner(N1, N1);
    PencilReduction red1(G1, opts.threshold);
    const Mat B = multiply(A1.topRows(N2), red1.T());
    const Mat P = hermitian_part(B * B.adjoint());  // leading block of A G^+ A^*
    const Mat G2 = G1.topLeftCorner(N2, N2);
    const Mat A2 = A1.topLeftCorner(N2, N2);
    PencilReduction red2(G2, opts.threshold);
    const Mat Pt = hermitian_part(red2.reduce(P));
    const Mat At = red2.reduce(A2);
    const double md = max_diag(G2);

    const std::size_t m = grid.size();
    PseudospectrumResult out;
    out.grid = grid;
    out.epsilon = epsilon;
    out.tau.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.errors.assign(m, std::string());
    std::vector<Vec> wit(m);
    const double tail = 1.0 / static_cast<double>(N2);
    parallel_for(m, [&](std::size_t i) {
        try {
            const cplx z = grid[i];
            // L(z) = P - z A2 - conj(z) A2^*: the same shape as the PF pencil with A2^* in place of A2.
            auto [mu, v] = eigh_smallest(shifted(Pt, At.adjoint(), z));
            (void)mu;
            Vec w = red2.lift(v);
            const double wGw = w.dot(G2 * w).real();
            const double wPw = w.dot(P * w).real();
            const cplx wAsw = std::conj(w.dot(A2 * w));  // w^* A2^* w
            out.tau[i] = residual_from_forms(z, wPw, wAsw, wGw, kDegenerateFloor * w.squaredNorm() * md);
            wit[i] = std::move(w);
        } catch (const std::exception& ex) {
            out.errors[i] = ex.what();
        }
    });
    if (opts.store_witnesses) out.witnesses.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::isfinite(out.tau[i]) && out.tau[i] + tail <= epsilon) {
            out.flagged.push_back(i);
            if (opts.store_witnesses) out.witnesses[i] = std::move(wit[i]);
        }
    }
    return out;
}

std::vector<cplx> rect_grid(double re_min, double re_max, double re_step, double im_min, double im_max,
                            double im_step) {
    if (!(re_step > 0.0) || !(im_step > 0.0)) throw InvalidInput("grid: steps must be positive");
    if (!(re_max >= re_min) || !(im_max >= im_min)) throw InvalidInput("grid: empty range");
    const long long nr = static_cast<long long>(std::floor((re_max - re_min) / re_step + 1e-9)) + 1;
    const long long ni = static_cast<long long>(std::floor((im_max - im_min) / im_step + 1e-9)) + 1;
    if (nr * ni > 50'000'000) throw InvalidInput("grid: too many points");
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(nr * ni));
    for (long long b = 0; b < ni; ++b)
        for (long long a = 0; a < nr; ++a) out.emplace_back(re_min + a * re_step, im_min + b * im_step);
    return out;
}

std::string pseudospectrum_csv(const PseudospectrumResult& res) {
    std::vector<char> flag(res.grid.size(), 0);
    for (std::size_t i : res.flagged) flag[i] = 1;
    std::ostringstream os;
    os << "re,im,tau,flagged\n";
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        os << format_double(res.grid[i].real()) << ',' << format_double(res.grid[i].imag()) << ','
           << (std::isfinite(res.tau[i]) ? format_double(res.tau[i]) : std::string("nan")) << ','
           << static_cast<int>(flag[i]) << '\n';
    }
    return os.str();
}

} // namespace specrkhs
