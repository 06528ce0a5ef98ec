#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specrkhs/gram.hpp"
#include "specrkhs/kernels.hpp"
#include "specrkhs/spectra.hpp"

namespace specrkhs {

struct ForecastModel {
    std::vector<VerifiedEigenpair> eigenpairs;
    Vec c;                    // coefficients of K_{x0} in the psi_i
    double delta = 0.0;       // ||K_{x0} - sum c_i psi_i||
    double eps_ver = 0.0;     // uniform residual bound over the eigenpairs
    double norm_Kstar = 1.0;  // bound on ||K^*||
    bool norm_defaulted = false;
    Point x0;
};

// eps_ver defaults to the largest residual among `verified`; an explicit value must not be smaller.
ForecastModel fit_model(const std::vector<VerifiedEigenpair>& verified, const GramTriple& gram,
                        const KernelSpec& kernel, const SnapshotSet& snapshots, const Point& x0,
                        std::optional<double> norm_Kstar = std::nullopt, std::optional<double> eps_ver = std::nullopt);

// sum_i conj(c_i) conj(lambda_i)^n <g, psi_i>, with g given by its values at the snapshot states.
cplx predict(const ForecastModel& model, const Vec& g_values, int n);

double error_bound(const ForecastModel& model, double norm_g, int n);

// Kernel-section coefficients (one column per state coordinate) of the least-squares interpolants
// of the coordinate functions.
Mat project_state_observables(const GramTriple& gram, const SnapshotSet& snapshots,
                              double threshold = kDefaultTruncation);

// Values at the snapshot states of g = sum_i C_i K_{x_i}, one column per observable.
Mat observable_values(const GramTriple& gram, const Mat& coeffs);

// b_l = K(x0, x_l).
Vec kernel_section_values(const KernelSpec& kernel, const SnapshotSet& snapshots, const Point& x0);

// <g, (P K^* P)^n P K_{x0}> for n = 0..steps: row n, one column per observable.
Mat galerkin_forecast(const CompressedBasis& basis, const Vec& section_values, const Mat& g_values, int steps);

std::string forecast_csv(const std::vector<cplx>& predicted, const std::vector<double>& bound);
std::string forecast_metadata_json(const ForecastModel& model);

} // namespace specrkhs
