#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "specrkhs/linalg.hpp"
#include "specrkhs/spectra.hpp"
#include "test_support.hpp"

using namespace specrkhs;
using namespace testsupport;

namespace {

Point pt(double v) {
    Point p(1);
    p(0) = v;
    return p;
}

GramTriple identity_gram(int n) {
    auto s = generate_snapshots(SystemSpec::identity(2), RandomBoxSampling{{-3, -3}, {3, 3}, n, 17});
    return build_gram(s, KernelSpec::gaussian(2, 1.0));
}

SnapshotSet gauss_snapshots(int count) {
    return generate_snapshots(SystemSpec::gauss_map(), ChebyshevSampling{-1.0, 0.0, 200, count, true});
}

// ||sum_i c_i K_{p_i}||^2 from kernel evaluations.
double section_norm2(const KernelSpec& k, const std::vector<Point>& p, const Vec& c) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) acc += c(j) * std::conj(c(i)) * k(p[j], p[i]);
    return acc.real();
}

std::vector<cplx> probe_points(Rng& rng, int n, double radius) {
    std::vector<cplx> z;
    for (int i = 0; i < n; ++i) z.emplace_back(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
    return z;
}

} // namespace

TEST_CASE("residual: identity dynamics") {
    auto g = identity_gram(12);
    Rng rng(1);
    for (int t = 0; t < 10; ++t) CHECK(residual(1.0, random_vector(rng, 12), g) < 1e-7);
    Vec e1 = Vec::Zero(12);
    e1(0) = 1.0;
    CHECK(residual(0.0, e1, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(residual(0.5, Vec::Zero(12), g), NumericalError);
    CHECK_THROWS_AS(residual(0.5, Vec::Zero(3), g), InvalidInput);
}

TEST_CASE("residual matches direct kernel expansion on gauss-map data") {
    Rng rng(2);
    auto k = KernelSpec::sobolev_h1(-1.0, 0.0);
    auto sys = SystemSpec::gauss_map();
    for (int t = 0; t < 20; ++t) {
        std::vector<Point> xs;
        for (int i = 0; i < 4; ++i) xs.push_back(pt(rng.uniform(-0.99, -0.01)));
        auto s = generate_snapshots(sys, GridSampling{xs});
        auto g = build_gram(s, k);
        const cplx lambda = random_complex(rng);
        const Vec c = random_vector(rng, 4);
        std::vector<Point> pts;
        Vec coef(8);
        for (int i = 0; i < 4; ++i) {
            pts.push_back(s.y(i));
            coef(i) = c(i);
        }
        for (int i = 0; i < 4; ++i) {
            pts.push_back(s.x(i));
            coef(4 + i) = -lambda * c(i);
        }
        const double want = std::sqrt(section_norm2(k, pts, coef) / section_norm2(k, xs, c));
        CHECK(rel_err(residual(lambda, c, g), want) < 1e-8);
    }
}

TEST_CASE("residual invariant: squared residual times g*Gg is the quadratic form") {
    Rng rng(3);
    auto s = generate_snapshots(SystemSpec::duffing(), RandomBoxSampling{{-1, -1}, {1, 1}, 20, 3});
    auto g = build_gram(s, KernelSpec::matern(2, 3, 2.0));
    for (int t = 0; t < 50; ++t) {
        Vec c = random_vector(rng, 20);
        cplx lambda = random_complex(rng);
        const double r = residual(lambda, c, g);
        const Mat L = g.R - lambda * g.A.adjoint() - std::conj(lambda) * g.A + std::norm(lambda) * g.G;
        const double q = c.dot(L * c).real();
        CHECK(r >= 0.0);
        CHECK(std::fabs(r * r * c.dot(g.G * c).real() - q) <= 1e-10 * std::max(1e-3, std::fabs(q)));
    }
}

TEST_CASE("verified eigenpairs: identity dynamics") {
    auto g = identity_gram(15);
    auto pairs = verify_eigenpairs(g, 1e-6);
    REQUIRE_FALSE(pairs.empty());
    for (const auto& p : pairs) {
        CHECK(std::abs(p.lambda - 1.0) < 1e-8);
        CHECK(p.residual <= 1e-8);
        CHECK(p.verified);
    }
}

TEST_CASE("verified eigenpairs: a single snapshot") {
    auto k = KernelSpec::sobolev_h1(-1.0, 0.0);
    auto s = generate_snapshots(SystemSpec::gauss_map(), GridSampling{{pt(-0.4)}});
    auto g = build_gram(s, k);
    auto pairs = verify_eigenpairs(g, 0.1);
    REQUIRE(pairs.size() == 1);
    const double kxx = k(s.x(0), s.x(0)).real(), kyx = k(s.y(0), s.x(0)).real(), kyy = k(s.y(0), s.y(0)).real();
    const double lambda = kyx / kxx;
    CHECK(rel_err(pairs[0].lambda.real(), lambda) < 1e-13);
    CHECK(std::fabs(pairs[0].residual - std::sqrt(std::max(0.0, kyy / kxx - lambda * lambda))) < 1e-7);
}

TEST_CASE("verified eigenpairs are sorted and carry recomputable residuals") {
    auto s = gauss_snapshots(40);
    auto g = build_gram(s, KernelSpec::sobolev_h1(-1.0, 0.0));
    auto pairs = verify_eigenpairs(g, 0.05);
    for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].residual <= pairs[i].residual);
    for (const auto& p : pairs) {
        if (!p.verified) continue;
        CHECK(residual(p.lambda, p.coeffs, g) < 0.05);
    }
}

TEST_CASE("pseudospectrum: identity dynamics") {
    auto g = identity_gram(10);
    auto r = pseudospectrum_pf(g, {1.0, 0.0, cplx(0.5, 0.5)}, 0.1);
    CHECK(r.tau[0] < 1e-8);
    CHECK(r.tau[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.tau[2] == doctest::Approx(std::abs(cplx(0.5, 0.5) - 1.0)).epsilon(1e-8));
    REQUIRE(r.flagged.size() == 1);
    CHECK(r.flagged[0] == 0);
    CHECK(r.witnesses[0].has_value());
    CHECK_FALSE(r.witnesses[1].has_value());
}

TEST_CASE("pseudospectrum: minimization property and witness reproducibility") {
    Rng rng(4);
    auto s = gauss_snapshots(30);
    auto g = build_gram(s, KernelSpec::sobolev_h1(-1.0, 0.0));
    auto grid = probe_points(rng, 40, 1.2);
    auto r = pseudospectrum_pf(g, grid, 0.3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(r.errors[i].empty());
        for (int t = 0; t < 100; ++t) CHECK(r.tau[i] <= residual(grid[i], random_vector(rng, 30), g) + 1e-12);
    }
    for (std::size_t i : r.flagged) {
        REQUIRE(r.witnesses[i].has_value());
        const double again = residual(grid[i], *r.witnesses[i], g);
        CHECK(std::fabs(again - r.tau[i]) <= 1e-10);
        CHECK(again < 0.3);
    }
}

TEST_CASE("pseudospectrum: brute-force equivalence on small instances") {
    Rng rng(5);
    for (int n = 1; n <= 6; ++n) {
        auto s = generate_snapshots(SystemSpec::duffing(), RandomBoxSampling{{-1, -1}, {1, 1}, n, 40u + n});
        auto g = build_gram(s, KernelSpec::gaussian(2, 1.0));
        const cplx z(rng.uniform(-1, 1), rng.uniform(-1, 1));
        auto r = pseudospectrum_pf(g, {z}, 0.0);
        double best = 1e300;
        for (int t = 0; t < 100000; ++t) best = std::min(best, brute_residual(z, random_vector(rng, n), g));
        CHECK(r.tau[0] <= best + 1e-12);
        CHECK(r.tau[0] <= best + 1e-6);
        if (n <= 2) CHECK(r.tau[0] >= best - 1e-3);  // dense enough to approach the minimum
    }
}

TEST_CASE("pseudospectrum: conjugation symmetry for real data") {
    Rng rng(6);
    auto s = gauss_snapshots(25);
    auto g = build_gram(s, KernelSpec::sobolev_h1(-1.0, 0.0));
    auto grid = probe_points(rng, 20, 1.0);
    std::vector<cplx> conj_grid;
    for (cplx z : grid) conj_grid.push_back(std::conj(z));
    auto a = pseudospectrum_pf(g, grid, 0.1), b = pseudospectrum_pf(g, conj_grid, 0.1);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::fabs(a.tau[i] - b.tau[i]) <= 1e-10);
}

TEST_CASE("pseudospectrum: non-increasing in N for nested snapshots") {
    Rng rng(7);
    auto k = KernelSpec::sobolev_h1(-1.0, 0.0);
    auto full = gauss_snapshots(60);
    std::vector<cplx> grid;
    for (int i = 0; i < 15; ++i) grid.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
    std::vector<double> prev;
    for (int n : {15, 30, 60}) {
        auto r = pseudospectrum_pf(build_gram(full.prefix(n), k), grid, 0.1);
        if (!prev.empty())
            for (std::size_t i = 0; i < grid.size(); ++i) CHECK(r.tau[i] <= prev[i] + 1e-9);
        prev = r.tau;
    }
}

TEST_CASE("default lattice grid") {
    auto g1 = default_grid(1);
    CHECK(g1.size() == 5);
    std::set<std::pair<long long, long long>> s1;
    for (cplx z : g1) s1.insert({std::llround(z.real()), std::llround(z.imag())});
    CHECK(s1 == std::set<std::pair<long long, long long>>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    for (int n : {1, 2, 3}) {
        auto g = default_grid(n);
        auto g2 = default_grid(2 * n);
        std::set<std::pair<long long, long long>> fine;
        for (cplx z : g2) fine.insert({std::llround(z.real() * 2 * n), std::llround(z.imag() * 2 * n)});
        for (cplx z : g) {
            CHECK(std::abs(z) <= n + 1e-12);
            const long long a = std::llround(z.real() * n), b = std::llround(z.imag() * n);
            CHECK(fine.count({2 * a, 2 * b}) == 1);
        }
    }
    CHECK_THROWS_AS(default_grid(0), InvalidInput);
}

TEST_CASE("compressed residuals: equality at full rank and dominance below") {
    Rng rng(8);
    auto s = gauss_snapshots(30);
    auto g = build_gram(s, KernelSpec::sobolev_h1(-1.0, 0.0));
    auto full = compress(g, 30);
    for (int t = 0; t < 50; ++t) {
        Vec gt = random_vector(rng, full.r);
        const cplx lambda = random_complex(rng);
        CHECK(std::fabs(residual_compressed(lambda, gt, full, g) - residual(lambda, full.W() * gt, g)) <= 1e-10);
    }
    auto grid = probe_points(rng, 20, 1.0);
    auto tauN = pseudospectrum_pf(g, grid, 0.0);
    for (int r : {5, 12, 20}) {
        auto b = compress(g, r);
        for (int t = 0; t < 30; ++t) {
            const std::size_t i = static_cast<std::size_t>(t) % grid.size();
            Vec gt = random_vector(rng, b.r);
            CHECK(residual_compressed(grid[i], gt, b, g) >= tauN.tau[i] - 1e-10);
        }
    }
    // e_1 with an eigenvalue of the compressed matrix.
    auto b = compress(g, 10);
    GeneralEig e = eig_general(b.khat_t);
    Vec v = e.vectors.col(0);
    Vec coeff = b.W() * v;
    CHECK(std::fabs(residual_compressed(e.values(0), v, b, g) - brute_residual(e.values(0), coeff, g)) <= 1e-10);
    Vec e1 = Vec::Zero(b.r);
    e1(0) = 1.0;
    CHECK(std::fabs(residual_compressed(0.3, e1, b, g) - brute_residual(0.3, b.W() * e1, g)) <= 1e-10);
}

TEST_CASE("koopman pseudospectrum: identity dynamics") {
    auto g = identity_gram(12);
    auto r = pseudospectrum_koop(g, 12, 6, {1.0, 0.0, cplx(0.2, 0.3)}, 0.2);
    CHECK(r.tau[0] < 1e-7);
    CHECK(r.tau[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.tau[2] == doctest::Approx(std::abs(cplx(0.2, 0.3) - 1.0)).epsilon(1e-8));
    CHECK(r.flagged.size() == 1);  // 1/6 <= 0.2
    auto r2 = pseudospectrum_koop(g, 12, 4, {1.0}, 0.2);
    CHECK(r2.flagged.empty());  // 1/4 > 0.2
    CHECK_THROWS_AS(pseudospectrum_koop(g, 12, 13, {1.0}, 0.2), InvalidInput);
}

TEST_CASE("koopman pseudospectrum: non-decreasing in N1") {
    Rng rng(9);
    auto s = gauss_snapshots(80);
    auto g = build_gram(s, KernelSpec::sobolev_h1(-1.0, 0.0));
    std::vector<cplx> grid;
    for (int i = 0; i < 20; ++i) grid.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
    std::vector<double> prev;
    for (int n1 : {20, 40, 80}) {
        auto r = pseudospectrum_koop(g, n1, 20, grid, 0.1);
        if (!prev.empty())
            for (std::size_t i = 0; i < grid.size(); ++i) CHECK(r.tau[i] >= prev[i] - 1e-9);
        prev = r.tau;
    }
}

TEST_CASE("pseudospectrum csv") {
    auto g = identity_gram(5);
    auto r = pseudospectrum_pf(g, {1.0, 0.0}, 0.5);
    auto csv = pseudospectrum_csv(r);
    CHECK(csv.rfind("re,im,tau,flagged\n", 0) == 0);
    CHECK(csv.find("\n0,0,1,0\n") != std::string::npos);
}
