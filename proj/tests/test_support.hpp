#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specrkhs/gram.hpp"
#include "specrkhs/rng.hpp"
#include "specrkhs/types.hpp"

namespace testsupport {

using specrkhs::cplx;
using specrkhs::Mat;
using specrkhs::Rng;
using specrkhs::Vec;

inline cplx random_complex(Rng& rng) { return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; }

inline Mat random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, bool complex_entries = true) {
    Mat M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            M(i, j) = complex_entries ? random_complex(rng) : cplx(rng.uniform(-1.0, 1.0), 0.0);
    return M;
}

inline Vec random_vector(Rng& rng, Eigen::Index n, bool complex_entries = true) {
    return random_matrix(rng, n, 1, complex_entries).col(0);
}

inline Mat random_hermitian(Rng& rng, Eigen::Index n) {
    Mat M = random_matrix(rng, n, n);
    return 0.5 * (M + M.adjoint());
}

// Well-conditioned Hermitian positive definite matrix.
inline Mat random_spd(Rng& rng, Eigen::Index n, double shift = 0.5) {
    Mat M = random_matrix(rng, n, n);
    Mat S = M * M.adjoint() + shift * Mat::Identity(n, n);
    return 0.5 * (S + S.adjoint());
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// Brute-force quadratic form of the residual numerator and denominator.
inline double brute_residual(cplx lambda, const Vec& g, const specrkhs::GramTriple& gr) {
    const Mat L = gr.R - lambda * gr.A.adjoint() - std::conj(lambda) * gr.A + std::norm(lambda) * gr.G;
    const double num = g.dot(L * g).real();
    const double den = g.dot(gr.G * g).real();
    return std::sqrt(std::max(0.0, num) / den);
}

} // namespace testsupport
