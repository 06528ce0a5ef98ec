#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "specrkhs/linalg.hpp"
#include "test_support.hpp"

using namespace specrkhs;
using namespace testsupport;

namespace {

// Dense oracle: eigenvalues of C^{-1} B from a general complex eigensolver, sorted by real part.
std::vector<double> oracle_eigenvalues(const Mat& B, const Mat& C) {
    Mat M = C.partialPivLu().solve(B);
    Eigen::ComplexEigenSolver<Mat> es(M, false);
    std::vector<double> v;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i).real());
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("hermitian definite pencil: trivial cases") {
    Rng rng(1);
    Mat C = random_spd(rng, 6);
    auto r = hermitian_definite_geig(C, C);
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(std::abs(r.eigenvalues(i) - 1.0) < 1e-12);

    Mat B = Mat::Zero(2, 2);
    B(0, 0) = 1;
    B(1, 1) = 2;
    auto d = hermitian_definite_geig(B, Mat::Identity(2, 2));
    CHECK(std::abs(d.eigenvalues(0) - 1.0) < 1e-14);
    CHECK(std::abs(d.eigenvalues(1) - 2.0) < 1e-14);
    CHECK(d.hermitian);
}

TEST_CASE("hermitian definite pencil agrees with a dense oracle on 100 random instances") {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 7;
        Mat B = random_hermitian(rng, n), C = random_spd(rng, n);
        auto r = hermitian_definite_geig(B, C);
        auto want = oracle_eigenvalues(B, C);
        REQUIRE(r.eigenvalues.size() == n);
        for (int i = 0; i < n; ++i) {
            CHECK(std::fabs(r.eigenvalues(i).real() - want[i]) <= 1e-9);
            CHECK(r.eigenvalues(i).imag() == 0.0);
            if (i > 0) CHECK(r.eigenvalues(i).real() >= r.eigenvalues(i - 1).real());
            const Vec v = r.eigenvectors.col(i);
            const double lhs = (B * v - r.eigenvalues(i) * (C * v)).norm();
            const double rhs = 1e-8 * (spectral_norm(B) + std::abs(r.eigenvalues(i)) * spectral_norm(C)) * v.norm();
            CHECK(lhs <= rhs);
        }
    }
}

TEST_CASE("indefinite right-hand matrix is reported with its eigenvalue") {
    Mat C = Mat::Identity(3, 3);
    C(2, 2) = -0.5;
    try {
        hermitian_definite_geig(Mat::Identity(3, 3), C);
        FAIL("expected an error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("-0.5") != std::string::npos);
    }
}

TEST_CASE("congruence invariance of the pencil spectrum") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        Mat B = random_hermitian(rng, 8), C = random_spd(rng, 8);
        Mat S = random_matrix(rng, 8, 8) + 3.0 * Mat::Identity(8, 8);
        auto a = hermitian_definite_geig(B, C);
        auto b = hermitian_definite_geig(S.adjoint() * B * S, S.adjoint() * C * S);
        for (int i = 0; i < 8; ++i) CHECK(std::abs(a.eigenvalues(i) - b.eigenvalues(i)) <= 1e-9);
    }
}

TEST_CASE("Weyl bound for perturbations with C = I") {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        Mat B = random_hermitian(rng, 7), E = random_hermitian(rng, 7);
        E *= 0.01 * rng.uniform() / spectral_norm(E);
        const double eta = spectral_norm(E);
        auto a = hermitian_definite_geig(B, Mat::Identity(7, 7));
        auto b = hermitian_definite_geig(B + E, Mat::Identity(7, 7));
        for (int i = 0; i < 7; ++i) CHECK(std::abs(a.eigenvalues(i) - b.eigenvalues(i)) <= eta + 1e-10);
    }
}

TEST_CASE("smallest generalized eigenpair") {
    Mat B = Mat::Zero(3, 3);
    B(0, 0) = 3;
    B(1, 1) = 1;
    B(2, 2) = 2;
    auto [mu, v] = smallest_geig_pair(B, Mat::Identity(3, 3));
    CHECK(std::fabs(mu - 1.0) < 1e-14);
    CHECK(std::fabs(std::abs(v(1)) - 1.0) < 1e-14);

    Rng rng(5);
    Mat C = random_spd(rng, 5);
    auto [m2, v2] = smallest_geig_pair(C, C);
    CHECK(std::fabs(m2 - 1.0) < 1e-12);
    CHECK((C * v2 - C * v2).norm() == 0.0);
    CHECK((C * v2 - m2 * (C * v2)).norm() <= 1e-10 * v2.norm() * spectral_norm(C));

    for (int t = 0; t < 30; ++t) {
        Mat Bt = random_hermitian(rng, 6), Ct = random_spd(rng, 6);
        auto full = hermitian_definite_geig(Bt, Ct);
        auto [ms, vs] = smallest_geig_pair(Bt, Ct);
        CHECK(std::fabs(ms - full.eigenvalues(0).real()) <= 1e-10);
    }
}

TEST_CASE("smallest eigenvalue never exceeds sampled Rayleigh quotients") {
    Rng rng(6);
    for (int t = 0; t < 5; ++t) {
        Mat B = random_hermitian(rng, 4), C = random_spd(rng, 4);
        auto [mu, v] = smallest_geig_pair(B, C);
        double best = 1e300;
        for (int s = 0; s < 10000; ++s) {
            Vec x = random_vector(rng, 4);
            best = std::min(best, x.dot(B * x).real() / x.dot(C * x).real());
        }
        CHECK(mu <= best + 1e-6);
        CHECK(std::fabs(v.dot(B * v).real() / v.dot(C * v).real() - mu) < 1e-10);
    }
}

TEST_CASE("general pencil through the truncated inverse") {
    Rng rng(7);
    Mat G = random_spd(rng, 6);
    auto same = general_geig(G, G);
    for (Eigen::Index i = 0; i < same.eigenvalues.size(); ++i) CHECK(std::abs(same.eigenvalues(i) - 1.0) < 1e-10);
    auto zero = general_geig(Mat::Zero(6, 6), G);
    for (Eigen::Index i = 0; i < zero.eigenvalues.size(); ++i) CHECK(std::abs(zero.eigenvalues(i)) < 1e-14);

    Mat N = Mat::Zero(2, 2);
    N(0, 1) = 1.0;
    auto nil = general_geig(N, Mat::Identity(2, 2));
    CHECK(std::abs(nil.eigenvalues(0)) < 1e-12);
    CHECK(std::abs(nil.eigenvalues(1)) < 1e-12);

    // Nonsingular G: eigenvalues of G^{-1} A and A g = lambda G g for the returned vectors.
    Mat A = random_matrix(rng, 6, 6);
    auto r = general_geig(A, G);
    for (Eigen::Index i = 0; i < 6; ++i) {
        const Vec g = r.eigenvectors.col(i);
        CHECK((A * g - r.eigenvalues(i) * (G * g)).norm() <= 1e-9 * g.norm() * (spectral_norm(A) + spectral_norm(G)));
    }
    CHECK_THROWS_AS(general_geig(A, Mat::Zero(6, 6)), NumericalError);
}

TEST_CASE("perturbation certificate") {
    CHECK(perturbed_geig_bound(1.0, 0.0, 0.0, 1.0) == 0.0);
    CHECK(perturbed_geig_bound(1.0, 0.1, 0.0, 2.0) == doctest::Approx(0.05));
    CHECK(perturbed_geig_bound(1.0, 0.1, 0.5, 2.0) == doctest::Approx(0.05 + 1.1 / 3.0 * 0.5));
    CHECK(perturbed_geig_bound(1.0, 0.1, 0.5, 2.0) == doctest::Approx(0.233333).epsilon(1e-5));
    CHECK_THROWS_AS(perturbed_geig_bound(1.0, 0.1, 2.0, 2.0), NumericalError);
}

TEST_CASE("least squares through the truncated eigen-inverse") {
    Vec b(3);
    b << cplx(1, 2), 3.0, cplx(0, -1);
    CHECK((solve_least_squares(Mat::Identity(3, 3), b) - b).norm() < 1e-15);

    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 2.0;
    Vec beta(2);
    beta << 2.0, 5.0;
    Vec c = solve_least_squares(M, beta);
    CHECK(std::abs(c(0) - 1.0) < 1e-15);
    CHECK(std::abs(c(1)) < 1e-15);

    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        Mat S = random_spd(rng, 7);
        Vec bb = random_vector(rng, 7);
        Vec x = solve_least_squares(S, bb);
        CHECK((S * x - bb).norm() <= 1e-9 * bb.norm());
    }
}

TEST_CASE("pencil reduction normalizes G on both paths") {
    Rng rng(9);
    Mat G = random_spd(rng, 6);
    PencilReduction full(G);
    CHECK(full.uses_cholesky());
    CHECK((full.T().adjoint() * G * full.T() - Mat::Identity(6, 6)).norm() < 1e-12);

    Mat U = random_matrix(rng, 6, 3);
    Mat low = U * U.adjoint();  // rank 3
    PencilReduction trunc(low);
    CHECK_FALSE(trunc.uses_cholesky());
    CHECK(trunc.rank() == 3);
    CHECK((trunc.T().adjoint() * low * trunc.T() - Mat::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("hermitian eigensolvers on real and complex input") {
    Rng rng(10);
    for (bool complex_entries : {false, true}) {
        Mat M = random_matrix(rng, 9, 9, complex_entries);
        Mat H = 0.5 * (M + M.adjoint());
        auto e = eigh(H);
        CHECK((H * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal()).norm() < 1e-12);
        auto [mu, v] = eigh_smallest(H);
        CHECK(std::fabs(mu - e.values(0)) < 1e-12);
        CHECK((H * v - mu * v).norm() < 1e-12);
        auto g = eig_general(M);
        for (Eigen::Index i = 0; i < 9; ++i)
            CHECK((M * g.vectors.col(i) - g.values(i) * g.vectors.col(i)).norm() < 1e-12);
    }
}

TEST_CASE("diagonal and tridiagonal hermitian matrices") {
    Rng rng(11);
    Mat D = Mat::Zero(6, 6);
    const double diag[] = {3.0, -1.0, 2.0, -1.0, 0.5, 7.0};
    for (int i = 0; i < 6; ++i) D(i, i) = diag[i];
    auto e = eigh(D);
    CHECK(e.values(0) == -1.0);
    CHECK(e.values(1) == -1.0);
    CHECK(e.values(5) == 7.0);
    CHECK((D * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal()).norm() == 0.0);
    CHECK((e.vectors.adjoint() * e.vectors - Mat::Identity(6, 6)).norm() == 0.0);

    // Second difference matrix: eigenvalues 2 - 2 cos(k pi / (n + 1)).
    const Eigen::Index n = 40;
    Mat T = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        T(i, i) = 2.0;
        if (i + 1 < n) T(i, i + 1) = T(i + 1, i) = -1.0;
    }
    auto t = eigh(T);
    for (Eigen::Index k = 0; k < n; ++k)
        CHECK(std::fabs(t.values(k) - (2.0 - 2.0 * std::cos(static_cast<double>(k + 1) * M_PI / (n + 1)))) < 1e-13);
    CHECK((T * t.vectors - t.vectors * t.values.cast<cplx>().asDiagonal()).norm() < 1e-12);
    CHECK(eigh(T, false).values.isApprox(t.values, 1e-14));

    // A complex tridiagonal matrix takes the dense path and must agree with it.
    Mat C = T;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        C(i + 1, i) = random_complex(rng);
        C(i, i + 1) = std::conj(C(i + 1, i));
    }
    auto c = eigh(C);
    CHECK((C * c.vectors - c.vectors * c.values.cast<cplx>().asDiagonal()).norm() < 1e-12);
}
