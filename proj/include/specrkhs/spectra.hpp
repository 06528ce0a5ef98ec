#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specrkhs/gram.hpp"
#include "specrkhs/types.hpp"

namespace specrkhs {

struct VerifiedEigenpair {
    cplx lambda;
    Vec coeffs;        // expansion in the kernel sections K_{x_i}
    double residual;   // +inf when the direction was degenerate
    bool verified;
};

struct PseudospectrumResult {
    std::vector<cplx> grid;
    std::vector<double> tau;           // NaN where the point failed (see errors)
    std::vector<std::string> errors;   // empty string for points that succeeded
    double epsilon = 0.0;
    std::vector<std::size_t> flagged;  // indices into grid
    std::vector<std::optional<Vec>> witnesses;  // per grid point, flagged points only; empty if not stored
};

struct PseudospectrumOptions {
    bool store_witnesses = true;
    double threshold = kDefaultTruncation;
};

// sqrt(g^*(R - lambda A^* - conj(lambda) A + |lambda|^2 G) g / g^*Gg).
double residual(cplx lambda, const Vec& g, const GramTriple& gram);

// Residuals for the columns of `coeffs` with matching eigenvalues; degenerate columns give +inf.
std::vector<double> residuals(const Vec& lambdas, const Mat& coeffs, const GramTriple& gram);

std::vector<VerifiedEigenpair> verify_eigenpairs(const GramTriple& gram, double epsilon,
                                                 double threshold = kDefaultTruncation, Eigen::Index max_rank = 0);

PseudospectrumResult pseudospectrum_pf(const GramTriple& gram, const std::vector<cplx>& grid, double epsilon,
                                       const PseudospectrumOptions& opts = {});

// (1/N)(Z + iZ) intersected with the disk |z| <= N.
std::vector<cplx> default_grid(int N);

double residual_compressed(cplx lambda, const Vec& g_tilde, const CompressedBasis& basis, const GramTriple& gram);

// Koopman pseudospectrum from the leading N1 snapshots (N1 <= gram size), truncated to the
// leading N2 x N2 block. Flags z when tau(z) + 1/N2 <= epsilon.
PseudospectrumResult pseudospectrum_koop(const GramTriple& gram, Eigen::Index N1, Eigen::Index N2,
                                         const std::vector<cplx>& grid, double epsilon,
                                         const PseudospectrumOptions& opts = {});

// Rectangular grid over [re_min, re_max] x [im_min, im_max] with the given steps.
std::vector<cplx> rect_grid(double re_min, double re_max, double re_step, double im_min, double im_max,
                            double im_step);

std::string pseudospectrum_csv(const PseudospectrumResult& res);

} // namespace specrkhs
