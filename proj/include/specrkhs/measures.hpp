#pragma once

#include <string>
#include <vector>

#include "specrkhs/gram.hpp"
#include "specrkhs/types.hpp"

namespace specrkhs {

// Poles a_j in the upper half-plane and residues alpha_j with sum_j alpha_j a_j^k = delta_{k0}
// for k < m.
struct RationalSmoothingKernel {
    std::vector<cplx> poles;
    std::vector<cplx> residues;
    int order() const { return static_cast<int>(poles.size()); }
};

RationalSmoothingKernel rational_kernel(const std::vector<cplx>& poles);

// a_j = 2j/(m+1) - 1 + i for j = 1..m.
std::vector<cplx> default_poles(int m);

struct NormalityReport {
    double selfadjoint_defect = 0.0;         // ||Khat_T - Khat_T^*||_2
    double unitary_defect = 0.0;             // ||Khat_T^* Khat_T - I||_2
    double kernel_unitary_defect = 0.0;      // max |R - G|
    double kernel_selfadjoint_defect = 0.0;  // max |A - A^*|
};

NormalityReport check_normality(const GramTriple& gram, const CompressedBasis& basis);

struct MeasureSamples {
    std::vector<double> points;
    std::vector<double> values;        // NaN at points with a pole collision
    std::vector<std::string> errors;   // per point, empty when fine
    double epsilon = 0.0;
    Vec observable;                    // u-basis coefficients
    bool hermitian_path = false;       // eigendecomposition used the self-adjoint route
    double cond_V = 1.0;               // 1-norm condition number of the eigenvector matrix
    double max_imag_ratio = 0.0;       // largest |Im| / (|Re| + 1e-12) of the assembled Stone sums
};

// Matrices whose Hermitian defect is at most this use the self-adjoint eigensolver.
inline constexpr double kNormalityTolerance = 1e-10;

MeasureSamples spectral_measure_selfadjoint(const Mat& khat_t, const Vec& g, const std::vector<double>& points,
                                            double epsilon, const RationalSmoothingKernel& kernel);

MeasureSamples spectral_measure_unitary(const Mat& khat_t, const Vec& g, const std::vector<double>& thetas,
                                        double epsilon, const RationalSmoothingKernel& kernel);

// Removes the component along the all-ones vector of kernel-section coefficients (sum c_i = 0).
Vec orthogonal_to_constant(const Vec& c);

std::string measure_csv(const MeasureSamples& s);
std::string measure_metadata_json(const MeasureSamples& s, const RationalSmoothingKernel& kernel,
                                  const std::string& type);

} // namespace specrkhs
