#pragma once

#include <utility>

#include "specrkhs/types.hpp"

namespace specrkhs {

struct HermitianEig {
    RVec values;  // ascending
    Mat vectors;  // orthonormal columns (empty when only values were requested)
};

// Dense Hermitian eigensolver (LAPACK divide and conquer; real routine when H is real). Diagonal
// matrices are sorted directly and real tridiagonal ones go to the tridiagonal solver.
HermitianEig eigh(const Mat& H, bool want_vectors = true);

// Smallest eigenpair of a Hermitian matrix without forming the full spectrum.
std::pair<double, Vec> eigh_smallest(const Mat& H);

struct GeneralEig {
    Vec values;
    Mat vectors;  // right eigenvectors, unit 2-norm columns
};

GeneralEig eig_general(const Mat& M);

// A * X, using real products whenever either factor is real.
Mat multiply(const Mat& A, const Mat& X);

// Largest singular value, and the largest |eigenvalue| of a Hermitian matrix.
double spectral_norm(const Mat& M);
double hermitian_norm(const Mat& H);

struct GeneralizedEigResult {
    Vec eigenvalues;   // real and ascending for the Hermitian-definite case
    Mat eigenvectors;  // one column per eigenvalue
    double sigma_inf = 0.0;  // smallest retained eigenvalue of the right-hand matrix
    Eigen::Index rank = 0;
    bool hermitian = false;
};

// B v = mu C v via C = L L^*, eigenvalues of L^{-1} B L^{-*}; eigenvectors are C-orthonormal.
GeneralizedEigResult hermitian_definite_geig(const Mat& B, const Mat& C, double threshold = kDefaultTruncation);

std::pair<double, Vec> smallest_geig_pair(const Mat& B, const Mat& C, double threshold = kDefaultTruncation);

// Eigenpairs of G^+ A on the retained eigenspace of G (relative cutoff `threshold`,
// at most max_rank directions when max_rank > 0). Eigenvectors are in the original coordinates.
GeneralizedEigResult general_geig(const Mat& A, const Mat& G, double threshold = kDefaultTruncation,
                                  Eigen::Index max_rank = 0);

// Eigenvalue perturbation certificate for H g = mu G g with noisy H, G.
double perturbed_geig_bound(double normH, double dH, double dG, double sigma_inf_G);

// argmin_c c^* M c - 2 Re(c^* beta) for Hermitian PSD M, through the truncated eigen-inverse.
Vec solve_least_squares(const Mat& M, const Vec& beta, double threshold = kDefaultTruncation);
Mat solve_least_squares(const Mat& M, const Mat& beta, double threshold = kDefaultTruncation);

// A congruence T (N x k) with T^* G T = I_k: T = L^{-*} when G is positive definite beyond
// the cutoff, otherwise the scaled dominant eigenvectors U_k Sigma_k^{-1}.
class PencilReduction {
public:
    explicit PencilReduction(const Mat& G, double threshold = kDefaultTruncation);

    const Mat& T() const { return T_; }
    Eigen::Index rank() const { return T_.cols(); }
    bool uses_cholesky() const { return cholesky_; }
    double sigma_inf() const { return sigma_inf_; }
    double lambda_max() const { return lambda_max_; }

    Mat reduce(const Mat& M) const;
    Vec lift(const Vec& v) const { return T_ * v; }

private:
    Mat T_;
    bool cholesky_ = false;
    double sigma_inf_ = 0.0;
    double lambda_max_ = 0.0;
};

} // namespace specrkhs
