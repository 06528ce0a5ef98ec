// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "specrkhs/dynamics.hpp"
#include "specrkhs/forecast.hpp"
#include "specrkhs/gram.hpp"
#include "specrkhs/kernels.hpp"
#include "specrkhs/linalg.hpp"
#include "specrkhs/measures.hpp"
#include "specrkhs/spectra.hpp"
#include "test_support.hpp"

using namespace specrkhs;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Point point(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p(i++) = x;
    return p;
}

// Gram triple from plain kernel loops over every (sample, sample) pair; shares nothing with
// build_gram beyond the kernel evaluation itself.
GramTriple direct_gram(const SnapshotSet& s, const KernelSpec& k) {
    const Eigen::Index n = s.count();
    const int S = s.samples();
    GramTriple g;
    g.G = Mat::Zero(n, n);
    g.A = Mat::Zero(n, n);
    g.R = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index c = 0; c < n; ++c) {
            g.G(j, c) = k(s.x(c), s.x(j));
            cplx a = 0.0, r = 0.0;
            for (int p = 0; p < S; ++p) {
                a += k(s.y(c, p), s.x(j));
                for (int q = 0; q < S; ++q) r += k(s.y(c, p), s.y(j, q));
            }
            g.A(j, c) = a / static_cast<double>(S);
            g.R(j, c) = r / static_cast<double>(S * S);
        }
    }
    return g;
}

std::vector<cplx> lattice(const std::vector<double>& re, const std::vector<double>& im) {
    std::vector<cplx> out;
    for (double y : im)
        for (double x : re) out.emplace_back(x, y);
    return out;
}

// Coarse-to-fine nodes so that smaller sets are prefixes of larger ones.
SnapshotSet gauss_nodes(int count) {
    return generate_snapshots(SystemSpec::gauss_map(), ChebyshevSampling{-1.0, 0.0, 200, 201, true}).prefix(count);
}

SnapshotSet gauss_sorted() {
    return generate_snapshots(SystemSpec::gauss_map(), ChebyshevSampling{-1.0, 0.0, 200, 201});
}

// ---------------------------------------------------------------- 1

Outcome exact_verification() {
    struct Case {
        std::string name;
        SystemSpec system;
        Sampling sampling;
        int samples;
        KernelSpec kernel;
    };
    const std::vector<Case> cases{
        {"gauss", SystemSpec::gauss_map(), ChebyshevSampling{-1.0, 0.0, 200, 201}, 1, KernelSpec::sobolev_h1(-1.0, 0.0)},
        {"duffing", SystemSpec::duffing(), RandomBoxSampling{{-2, -2}, {2, 2}, 200, 1}, 1, KernelSpec::matern(2, 3, 1.0)},
        {"lorenz", SystemSpec::lorenz(), TrajectorySampling{point({-8, 8, 27}), 400}, 1, KernelSpec::gaussian(3, 0.1)},
        {"mobius", SystemSpec::mobius_preset(2), DiskSampling{0.25, 200, 1}, 1, KernelSpec::hyperbolic_gaussian(5.0)},
        {"random-walk", SystemSpec::random_walk(100, 3), LatticeSampling{-100, 100}, 10, KernelSpec::discrete_delta()},
        {"random-walk-perturbed", SystemSpec::random_walk_perturbed(7, 100), LatticeSampling{-100, 100}, 10,
         KernelSpec::discrete_delta()},
        {"identity", SystemSpec::identity(2), RandomBoxSampling{{-1, -1}, {1, 1}, 200, 1}, 1, KernelSpec::gaussian(2, 1.0)},
    };
    const double eps = 0.1;
    std::vector<double> re, im;
    for (int i = 0; i < 25; ++i) re.push_back(-1.2 + 0.1 * i);
    for (int i = 0; i < 20; ++i) im.push_back(-0.95 + 0.1 * i);
    const auto grid = lattice(re, im);

    Outcome o;
    std::ostringstream d;
    std::size_t witnesses = 0, violations = 0;
    double slowest = 0.0;
    for (const auto& c : cases) {
        const auto t0 = Clock::now();
        const auto snaps = generate_snapshots(c.system, c.sampling, c.samples);
        const auto gram = build_gram(snaps, c.kernel);
        const auto pairs = verify_eigenpairs(gram, eps);
        const auto ps = pseudospectrum_pf(gram, grid, eps);
        const double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);

        const auto check = direct_gram(snaps, c.kernel);
        std::size_t w = 0, bad = 0;
        for (const auto& e : pairs) {
            if (!e.verified) continue;
            ++w;
            if (!(brute_residual(e.lambda, e.coeffs, check) < eps)) ++bad;
        }
        for (std::size_t i : ps.flagged) {
            ++w;
            if (!ps.witnesses[i] || !(brute_residual(ps.grid[i], *ps.witnesses[i], check) < eps)) ++bad;
        }
        witnesses += w;
        violations += bad;
        d << c.name << " N=" << gram.size() << " " << w << " witnesses " << fmt(secs) << "s; ";
        if (secs >= 30.0) o.pass = false;
    }
    if (violations > 0) o.pass = false;
    d << "total " << witnesses << " witnesses, " << violations << " violations, slowest system " << fmt(slowest) << "s";
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------- 2, 3

std::vector<double> axis(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

Outcome pf_monotonicity() {
    const auto t0 = Clock::now();
    const auto grid = lattice(axis(-0.9, 0.9, 5), axis(-0.6, 0.6, 5));
    const auto kernel = KernelSpec::sobolev_h1(-1.0, 0.0);
    std::vector<std::vector<double>> tau;
    for (int n : {50, 100, 200}) tau.push_back(pseudospectrum_pf(build_gram(gauss_nodes(n), kernel), grid, 0.1).tau);
    double worst = -INFINITY;
    for (std::size_t k = 1; k < tau.size(); ++k)
        for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, tau[k][i] - tau[k - 1][i]);
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 20.0, "max increase " + fmt(worst) + " over 25 points, tau_200 in [" +
                                              fmt(*std::min_element(tau[2].begin(), tau[2].end())) + ", " +
                                              fmt(*std::max_element(tau[2].begin(), tau[2].end())) + "], " +
                                              fmt(secs) + "s"};
}

Outcome koopman_monotonicity() {
    const auto t0 = Clock::now();
    const auto grid = lattice(axis(-0.9, 0.9, 5), axis(-0.6, 0.6, 4));
    const auto gram = build_gram(gauss_nodes(200), KernelSpec::sobolev_h1(-1.0, 0.0));
    std::vector<std::vector<double>> tau;
    for (int n1 : {50, 100, 200}) tau.push_back(pseudospectrum_koop(gram, n1, 50, grid, 0.1).tau);
    double worst = -INFINITY;
    for (std::size_t k = 1; k < tau.size(); ++k)
        for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, tau[k - 1][i] - tau[k][i]);
    return {worst <= 1e-9, "max decrease " + fmt(worst) + " over 20 points, " + fmt(seconds_since(t0)) + "s"};
}

// ---------------------------------------------------------------- 4

Outcome compression_consistency() {
    const auto t0 = Clock::now();
    const auto gram = build_gram(gauss_nodes(60), KernelSpec::sobolev_h1(-1.0, 0.0));
    const Eigen::Index N = gram.size();
    Rng rng(4);
    const int probes = 1000;
    std::vector<cplx> z(probes);
    for (auto& p : z) p = cplx(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
    const auto tau = pseudospectrum_pf(gram, z, 0.0).tau;

    const auto full = compress(gram, N);
    double equal_gap = 0.0, dominance = INFINITY;
    std::vector<CompressedBasis> bases;
    for (Eigen::Index r : {5, 15, 30, 45, 59}) bases.push_back(compress(gram, r));
    for (int t = 0; t < probes; ++t) {
        const Vec g = random_vector(rng, full.r);
        equal_gap = std::max(equal_gap, std::fabs(residual_compressed(z[t], g, full, gram) -
                                                  residual(z[t], full.W() * g, gram)));
        const auto& b = bases[static_cast<std::size_t>(t) % bases.size()];
        const Vec h = random_vector(rng, b.r);
        dominance = std::min(dominance, residual_compressed(z[t], h, b, gram) - tau[t]);
    }
    return {equal_gap <= 1e-10 && dominance >= -1e-10,
            "r=N max gap " + fmt(equal_gap) + ", r<N min(res_r - tau_N) " + fmt(dominance) + " on 1000 probes, " +
                fmt(seconds_since(t0)) + "s"};
}

// ---------------------------------------------------------------- 5

double walk_density(double x) {
    const double q = 6.0 * x + 3.0 - 9.0 * x * x;
    return (x > -1.0 / 3.0 && x < 1.0 && q > 0.0) ? 3.0 / (4.0 * pi) * std::sqrt(q) : 0.0;
}

Outcome random_walk_measure() {
    const auto t0 = Clock::now();
    const long long W = 1000;
    const double eps = 0.05;
    std::vector<long long> states;
    for (long long s = -W; s <= W; ++s) states.push_back(s);
    const auto gram = build_gram_exact_chain(SystemSpec::random_walk(W), states, KernelSpec::discrete_delta());
    const auto basis = compress(gram, gram.size());
    Vec c = Vec::Zero(gram.size());
    c(W + 1) = 0.5;
    c(W - 1) = -0.5;
    const Vec g = to_u_basis(c, basis, gram);
    const auto kernel = rational_kernel(default_poles(6));

    const auto inside = axis(-0.25, 0.9, 200);
    std::vector<double> outside;
    for (double x : axis(-2.0, -1.0 / 3.0 - 10 * eps - 1e-9, 50)) outside.push_back(x);
    for (double x : axis(1.0 + 10 * eps + 1e-9, 2.5, 50)) outside.push_back(x);
    const auto in = spectral_measure_selfadjoint(basis.khat_t, g, inside, eps, kernel);
    const auto out = spectral_measure_selfadjoint(basis.khat_t, g, outside, eps, kernel);
    double dev = 0.0, leak = 0.0;
    for (std::size_t i = 0; i < inside.size(); ++i) dev = std::max(dev, std::fabs(in.values[i] - walk_density(inside[i])));
    for (double v : out.values) leak = std::max(leak, std::fabs(v));
    const double secs = seconds_since(t0);
    return {dev < 1e-2 && leak < 1e-3 && secs < 60.0,
            "max deviation " + fmt(dev) + " on 200 points, max |value| outside support " + fmt(leak) + ", " +
                fmt(secs) + "s"};
}

// ---------------------------------------------------------------- 6

Outcome mobius_rate() {
    const auto t0 = Clock::now();
    const int N = 200;
    const auto snaps = generate_snapshots(SystemSpec::mobius_preset(2), DiskSampling{0.25, N, 1});
    const auto gram = build_gram(snaps, KernelSpec::hyperbolic_gaussian(1.0));
    const auto basis = compress(gram, N);
    Rng rng(101);
    Vec c(N);
    for (int i = 0; i < N; ++i) c(i) = rng.uniform();
    Vec g = to_u_basis(c, basis, gram);
    g /= g.norm();
    const double theta = pi / 3.0;
    Outcome o;
    std::ostringstream d;
    for (int m : {2, 4}) {
        const auto kernel = rational_kernel(default_poles(m));
        const double ref = spectral_measure_unitary(basis.khat_t, g, {theta}, 1e-4, kernel).values[0];
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double e : {0.2, 0.1, 0.05, 0.025}) {
            const double err = std::fabs(spectral_measure_unitary(basis.khat_t, g, {theta}, e, kernel).values[0] - ref);
            if (!(err >= 1e-12)) continue;
            const double x = std::log(e), y = std::log(err);
            sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
        }
        const double slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : NAN;
        if (!(std::fabs(slope - m) <= 0.5)) o.pass = false;
        d << "m=" << m << " slope " << fmt(slope) << " (" << n << " points); ";
    }
    const double secs = seconds_since(t0);
    if (secs >= 60.0) o.pass = false;
    d << fmt(secs) << "s";
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------- 7

Outcome unitarity_detection() {
    const auto mob = build_gram(generate_snapshots(SystemSpec::mobius_preset(2), DiskSampling{0.25, 200, 1}),
                                KernelSpec::hyperbolic_gaussian(5.0));
    const auto gauss = build_gram(gauss_sorted(), KernelSpec::sobolev_h1(-1.0, 0.0));
    const double dm = (mob.R - mob.G).cwiseAbs().maxCoeff();
    const double dg = (gauss.R - gauss.G).cwiseAbs().maxCoeff();
    return {dm <= 1e-12 && dg > 1e-3, "mobius max|R-G| " + fmt(dm) + ", gauss max|R-G| " + fmt(dg)};
}

// ---------------------------------------------------------------- 8

Outcome duffing_forecast() {
    const auto t0 = Clock::now();
    const auto sys = SystemSpec::duffing();
    const auto kernel = KernelSpec::matern(2, 3, 1.0);
    const auto snaps = generate_snapshots(sys, RandomBoxSampling{{-2, -2}, {2, 2}, 400, 1});
    const auto gram = build_gram(snaps, kernel);
    const auto modes = verify_eigenpairs(gram, std::numeric_limits<double>::infinity());
    const Mat C = project_state_observables(gram, snaps);
    const Mat vals = observable_values(gram, C);
    double norm_g[2];
    for (Eigen::Index c = 0; c < 2; ++c) norm_g[c] = std::sqrt(C.col(c).dot(gram.G * C.col(c)).real());

    Rng rng(2);
    double rel_sum = 0.0, worst_ratio = 0.0;
    int rel_count = 0, violations = 0;
    for (int ic = 0; ic < 10; ++ic) {
        const Point x0 = point({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
        const auto model = fit_model(modes, gram, kernel, snaps, x0, 1.0);
        const auto tr = trajectory(sys, x0, 30);
        for (int n = 1; n <= 30; ++n) {
            double err2 = 0.0, norm2 = 0.0;
            for (Eigen::Index c = 0; c < 2; ++c) {
                const cplx pred = predict(model, vals.col(c), n);
                cplx truth = 0.0;  // the projected observable at F^n(x0)
                for (Eigen::Index i = 0; i < snaps.count(); ++i) truth += C(i, c) * kernel(tr[n], snaps.x(i));
                const double bound = error_bound(model, norm_g[c], n);
                const double err = std::abs(pred - truth);
                if (!(err <= bound)) ++violations;
                worst_ratio = std::max(worst_ratio, err / bound);
                err2 += std::norm(pred - tr[n](c));
                norm2 += std::norm(tr[n](c));
            }
            rel_sum += std::sqrt(err2 / norm2);
            ++rel_count;
        }
    }
    const double mean_rel = rel_sum / rel_count;
    const double secs = seconds_since(t0);
    return {violations == 0 && mean_rel < 1e-3 && secs < 120.0,
            std::to_string(violations) + " bound violations in 600 checks (max error/bound " + fmt(worst_ratio) +
                "), mean relative state error " + fmt(mean_rel) + ", " + fmt(secs) + "s"};
}

// ---------------------------------------------------------------- 9

Outcome gauss_spectrum() {
    const auto gram = build_gram(gauss_sorted(), KernelSpec::sobolev_h1(-1.0, 0.0));
    double outer = INFINITY, inner = INFINITY;
    for (const auto& e : verify_eigenpairs(gram, 0.1)) {
        if (std::abs(e.lambda) > 0.9) outer = std::min(outer, e.residual);
        if (std::abs(e.lambda) < 0.1) inner = std::min(inner, e.residual);
    }
    return {outer < 0.1 && inner > 0.5,
            "min residual |lambda|>0.9: " + fmt(outer) + ", min residual |lambda|<0.1: " + fmt(inner)};
}

// ---------------------------------------------------------------- 10

using Poly = std::vector<Rational>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// r -> int_r^1 t f(t) dt, exactly.
Poly integrate_tail(const Poly& f) {
    Poly anti(f.size() + 2, Rational(0));
    for (std::size_t i = 0; i < f.size(); ++i) anti[i + 2] = f[i] / Rational(static_cast<std::int64_t>(i + 2));
    Rational at_one(0);
    for (const auto& c : anti) at_one += c;
    for (auto& c : anti) c = -c;
    anti[0] += at_one;
    while (anti.size() > 1 && anti.back() == Rational(0)) anti.pop_back();
    return anti;
}

Outcome unit_oracles() {
    const auto t0 = Clock::now();
    std::vector<std::string> failed;
    const Poly one_minus_r{Rational(1), Rational(-1)};

    // Wendland: phi_{3,0} = (1-r)^2, phi_{1,1} = int_r^1 t (1-r)^2 dt = (1-r)^3 (3r+1) / 12.
    if (wendland_polynomial(3, 0).coeffs != poly_mul(one_minus_r, one_minus_r)) failed.push_back("wendland(3,0)");
    const Poly w11 = integrate_tail(poly_mul(one_minus_r, one_minus_r));
    const Poly closed = poly_mul(poly_mul(poly_mul(one_minus_r, one_minus_r), one_minus_r), {Rational(1, 12), Rational(3, 12)});
    if (w11 != closed || wendland_polynomial(1, 1).coeffs != w11) failed.push_back("wendland(1,1)");

    // Vandermonde residues against a dense LU solve of sum_j alpha_j a_j^p = [p == 0].
    double vgap = 0.0;
    for (int m = 1; m <= 6; ++m) {
        const auto k = rational_kernel(default_poles(m));
        Mat V(m, m);
        Vec rhs = Vec::Zero(m);
        rhs(0) = 1.0;
        for (int p = 0; p < m; ++p)
            for (int j = 0; j < m; ++j) V(p, j) = std::pow(k.poles[static_cast<std::size_t>(j)], p);
        const Vec alpha = V.fullPivLu().solve(rhs);
        for (int j = 0; j < m; ++j) vgap = std::max(vgap, std::abs(alpha(j) - k.residues[static_cast<std::size_t>(j)]));
    }
    if (!(vgap <= 1e-10)) failed.push_back("vandermonde " + fmt(vgap));

    // Matern half-integer closed forms in u = sigma r.
    double mgap = 0.0;
    const std::vector<std::function<double(double)>> forms{
        [](double u) { return std::exp(-u); },
        [](double u) { return (1 + u) * std::exp(-u); },
        [](double u) { return (1 + u + u * u / 3) * std::exp(-u); },
        [](double u) { return (1 + u + 2 * u * u / 5 + u * u * u / 15) * std::exp(-u); },
    };
    for (int d : {1, 3}) {
        for (std::size_t which = 0; which < forms.size(); ++which) {
            const int n = (d + 1) / 2 + static_cast<int>(which);  // nu = n - d/2 = which + 1/2
            const double sigma = 1.3;
            const auto k = KernelSpec::matern(d, n, sigma);
            for (double r = 0.0; r <= 15.0; r += 0.05) {
                Point x = Point::Zero(d), y = Point::Zero(d);
                y(0) = r;
                const double want = forms[which](sigma * r);
                mgap = std::max(mgap, std::fabs(k(x, y).real() - want) / std::max(want, 1e-300));
            }
        }
    }
    if (!(mgap <= 1e-10)) failed.push_back("matern " + fmt(mgap));

    // Hermitian-definite pencils against eigenvalues of C^{-1} B from a general dense solver.
    Rng rng(10);
    double ggap = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 9;
        const Mat B = random_hermitian(rng, n), C = random_spd(rng, n);
        const auto r = hermitian_definite_geig(B, C);
        Eigen::ComplexEigenSolver<Mat> es(Mat(C.partialPivLu().solve(B)), false);
        std::vector<double> want;
        for (int i = 0; i < n; ++i) want.push_back(es.eigenvalues()(i).real());
        std::sort(want.begin(), want.end());
        if (r.eigenvalues.size() != n) {
            ggap = INFINITY;
            continue;
        }
        for (int i = 0; i < n; ++i) ggap = std::max(ggap, std::abs(r.eigenvalues(i) - want[static_cast<std::size_t>(i)]));
    }
    if (!(ggap <= 1e-9)) failed.push_back("geig " + fmt(ggap));

    const double secs = seconds_since(t0);
    if (secs >= 10.0) failed.push_back("runtime");
    std::string detail = "vandermonde gap " + fmt(vgap) + ", matern rel gap " + fmt(mgap) + ", geig gap " + fmt(ggap) +
                         " on 100 pencils, wendland exact, " + fmt(secs) + "s";
    for (const auto& f : failed) detail += "; failed: " + f;
    return {failed.empty(), detail};
}

} // namespace

// With arguments, only the listed criteria (1-based) are run.
int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact verification of flagged and verified witnesses", exact_verification},
        {"pseudospectrum residual non-increasing in N", pf_monotonicity},
        {"Koopman residual non-decreasing in N1", koopman_monotonicity},
        {"compression consistency", compression_consistency},
        {"random-walk spectral measure", random_walk_measure},
        {"smoothing rate on the Mobius map", mobius_rate},
        {"unitarity detection", unitarity_detection},
        {"certified Duffing forecasts", duffing_forecast},
        {"Gauss-map spectrum", gauss_spectrum},
        {"unit-level oracles", unit_oracles},
    };
    std::vector<std::size_t> selected;
    for (int a = 1; a < argc; ++a) {
        const long k = std::strtol(argv[a], nullptr, 10);
        if (k < 1 || k > static_cast<long>(criteria.size())) {
            std::fprintf(stderr, "acceptance: no criterion %s\n", argv[a]);
            return 2;
        }
        selected.push_back(static_cast<std::size_t>(k - 1));
    }
    if (selected.empty())
        for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
    int failures = 0;
    for (std::size_t i : selected) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
