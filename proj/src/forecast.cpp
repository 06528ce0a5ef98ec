#include "specrkhs/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "specrkhs/linalg.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs {

ForecastModel fit_model(const std::vector<VerifiedEigenpair>& verified, const GramTriple& gram,
                        const KernelSpec& kernel, const SnapshotSet& snapshots, const Point& x0,
                        std::optional<double> norm_Kstar, std::optional<double> eps_ver) {
    if (verified.empty()) throw InvalidInput("fit_model: no verified eigenpairs");
    const Eigen::Index n = gram.size();
    if (snapshots.count() != n) throw InvalidInput("fit_model: snapshots do not match the Gram triple");
    const Eigen::Index p = static_cast<Eigen::Index>(verified.size());

    ForecastModel m;
    m.eigenpairs = verified;
    m.x0 = x0;
    double worst = 0.0;
    Mat Psi(n, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const auto& e = verified[static_cast<std::size_t>(i)];
        if (e.coeffs.size() != n) throw InvalidInput("fit_model: eigenvector length differs from N");
        if (!std::isfinite(e.residual)) throw InvalidInput("fit_model: eigenpair without a finite residual");
        worst = std::max(worst, e.residual);
        Psi.col(i) = e.coeffs;
    }
    if (eps_ver) {
        if (*eps_ver < worst) throw InvalidInput("fit_model: eps_ver is smaller than an eigenpair residual");
        m.eps_ver = *eps_ver;
    } else {
        m.eps_ver = worst;
    }
    if (norm_Kstar) {
        if (!(*norm_Kstar >= 0.0)) throw InvalidInput("fit_model: norm_Kstar must be non-negative");
        m.norm_Kstar = *norm_Kstar;
    } else {
        m.norm_Kstar = 1.0;
        m.norm_defaulted = true;
    }

    // Least squares in an orthonormal basis of span{K_{x_l}}: with G = V diag(mu) V^*, the
    // coordinates of psi_i are diag(sqrt(mu)) V^* Psi and those of K_{x0} are diag(1/sqrt(mu)) V^* b.
    // When x0 is itself a snapshot state x_j the coordinates are diag(sqrt(mu)) V^* e_j and the
    // distance to the span is the discarded part of G_jj, both free of cancellation.
    const Vec b = kernel_section_values(kernel, snapshots, x0);
    std::optional<Eigen::Index> same;
    for (Eigen::Index l = 0; l < n && !same; ++l)
        if (x0.size() == snapshots.dim() && x0 == snapshots.x(l)) same = l;
    const HermitianEig e = eigh(Mat(0.5 * (gram.G + gram.G.adjoint())));
    const double mu_max = e.values(n - 1);
    if (!(mu_max > 0.0)) throw NumericalError("fit_model: G has no positive eigenvalues");
    std::vector<Eigen::Index> kept;
    double dropped = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (e.values(i) > kDefaultTruncation * mu_max)
            kept.push_back(i);
        else if (same)
            dropped += std::max(0.0, e.values(i)) * std::norm(e.vectors(*same, i));
    }
    const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
    Mat B(r, p);
    Vec u(r);
    const Mat VPsi = e.vectors.adjoint() * Psi;
    const Vec Vb = e.vectors.adjoint() * b;
    for (Eigen::Index k = 0; k < r; ++k) {
        const Eigen::Index col = kept[static_cast<std::size_t>(k)];
        const double mu = e.values(col);
        B.row(k) = std::sqrt(mu) * VPsi.row(col);
        u(k) = same ? std::sqrt(mu) * std::conj(e.vectors(*same, col)) : Vb(col) / std::sqrt(mu);
    }
    Eigen::BDCSVD<Mat> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    m.c = svd.solve(u);
    const double outside = same ? dropped : kernel(x0, x0).real() - u.squaredNorm();
    m.delta = std::sqrt(std::max(0.0, outside + (B * m.c - u).squaredNorm()));
    return m;
}

cplx predict(const ForecastModel& model, const Vec& g_values, int n) {
    if (n < 0) throw InvalidInput("predict: step count must be non-negative");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < model.eigenpairs.size(); ++i) {
        const auto& e = model.eigenpairs[i];
        if (g_values.size() != e.coeffs.size()) throw InvalidInput("predict: observable length differs from N");
        const cplx inner = e.coeffs.dot(g_values);  // sum_j conj(g_j) g(x_j)
        acc += std::conj(model.c(static_cast<Eigen::Index>(i))) * std::pow(std::conj(e.lambda), n) * inner;
    }
    return acc;
}

double error_bound(const ForecastModel& model, double norm_g, int n) {
    if (n < 0) throw InvalidInput("error_bound: step count must be non-negative");
    const double K = model.norm_Kstar;
    double modes = 0.0;
    for (std::size_t i = 0; i < model.eigenpairs.size(); ++i) {
        const double l = std::abs(model.eigenpairs[i].lambda);
        double geo;  // sum_{j=1}^n l^{n-j} K^{j-1}
        if (n == 0) {
            geo = 0.0;
        } else if (std::fabs(l - K) <= 1e-12 * std::max(1.0, K)) {
            geo = 0.0;
            for (int j = 1; j <= n; ++j) geo += std::pow(l, n - j) * std::pow(K, j - 1);
        } else {
            geo = (std::pow(l, n) - std::pow(K, n)) / (l - K);
        }
        modes += std::abs(model.c(static_cast<Eigen::Index>(i))) * geo;
    }
    return norm_g * (model.delta * std::pow(K, n) + model.eps_ver * modes);
}

Mat project_state_observables(const GramTriple& gram, const SnapshotSet& snapshots, double threshold) {
    if (snapshots.count() != gram.size()) throw InvalidInput("project_state_observables: size mismatch");
    // g(x_j) = sum_i C_i K(x_j, x_i) = (G^T C)_j, and G^T = conj(G) is Hermitian PSD.
    return solve_least_squares(Mat(gram.G.conjugate()), Mat(snapshots.X), threshold);
}

Mat observable_values(const GramTriple& gram, const Mat& coeffs) {
    if (coeffs.rows() != gram.size()) throw InvalidInput("observable_values: size mismatch");
    return multiply(gram.G.transpose(), coeffs);
}

Vec kernel_section_values(const KernelSpec& kernel, const SnapshotSet& snapshots, const Point& x0) {
    kernel.check_point(x0);
    Vec b(snapshots.count());
    for (Eigen::Index l = 0; l < snapshots.count(); ++l) b(l) = kernel(x0, snapshots.x(l));
    return b;
}

Mat galerkin_forecast(const CompressedBasis& basis, const Vec& section_values, const Mat& g_values, int steps) {
    if (steps < 0) throw InvalidInput("galerkin_forecast: step count must be non-negative");
    const Mat W = basis.W();
    if (section_values.size() != W.rows() || g_values.rows() != W.rows())
        throw InvalidInput("galerkin_forecast: vector length differs from N");
    Vec v = W.adjoint() * section_values;
    const Mat gu = W.adjoint() * g_values;
    Mat out(steps + 1, g_values.cols());
    for (int n = 0; n <= steps; ++n) {
        out.row(n) = (v.adjoint() * gu);
        v = basis.khat_t * v;
    }
    return out;
}

std::string forecast_csv(const std::vector<cplx>& predicted, const std::vector<double>& bound) {
    std::ostringstream os;
    os << "n,predicted,bound\n";
    for (std::size_t n = 0; n < predicted.size(); ++n) {
        const cplx p = predicted[n];
        const bool real = std::fabs(p.imag()) <= 1e-12 * std::max(1.0, std::fabs(p.real()));
        os << n << ',' << (real ? format_double(p.real()) : format_complex(p)) << ','
           << (n < bound.size() && std::isfinite(bound[n]) ? format_double(bound[n]) : std::string("nan")) << '\n';
    }
    return os.str();
}

std::string forecast_metadata_json(const ForecastModel& model) {
    nlohmann::json j;
    j["delta"] = model.delta;
    j["eps_ver"] = model.eps_ver;
    j["norm_Kstar"] = model.norm_Kstar;
    j["norm_Kstar_defaulted"] = model.norm_defaulted;
    if (model.norm_defaulted)
        j["warning"] = "norm_Kstar defaulted to 1, which holds for radial kernels; supply it for other kernels";
    j["eigenvalues"] = nlohmann::json::array();
    for (const auto& e : model.eigenpairs)
        j["eigenvalues"].push_back({{"re", e.lambda.real()}, {"im", e.lambda.imag()}, {"residual", e.residual}});
    return j.dump(2) + "\n";
}

} // namespace specrkhs
