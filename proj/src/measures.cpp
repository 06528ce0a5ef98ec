#include "specrkhs/measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "specrkhs/linalg.hpp"
#include "specrkhs/parallel.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs {

namespace {

constexpr double kCollision = 1e-14;

struct Decomposition {
    Vec lambda;
    Vec q;  // q_i = conj(h'_i) h_i with h = V^{-1} g, h' = V^* g
    bool hermitian = false;
    double cond = 1.0;
};

Decomposition decompose(const Mat& M, const Vec& g, bool allow_hermitian) {
    if (M.rows() != M.cols() || M.rows() == 0) throw InvalidInput("spectral measure: matrix must be square and non-empty");
    if (g.size() != M.rows()) throw InvalidInput("spectral measure: observable length differs from matrix size");
    if (!M.allFinite() || !g.allFinite()) throw NumericalError("spectral measure: non-finite input");
    Decomposition d;
    const double defect = (M - M.adjoint()).cwiseAbs().maxCoeff();
    if (allow_hermitian && defect <= kNormalityTolerance) {
        HermitianEig e = eigh(0.5 * (M + M.adjoint()));
        Vec h = e.vectors.adjoint() * g;
        d.lambda = e.values.cast<cplx>();
        d.q = h.cwiseAbs2().cast<cplx>();
        d.hermitian = true;
        return d;
    }
    GeneralEig e = eig_general(M);
    Eigen::PartialPivLU<Mat> lu(e.vectors);
    Mat Vinv = lu.inverse();
    if (!Vinv.allFinite()) throw NumericalError("spectral measure: eigenvector matrix is singular");
    Vec h = Vinv * g;
    Vec hp = e.vectors.adjoint() * g;
    d.lambda = e.values;
    d.q = hp.conjugate().cwiseProduct(h);
    d.cond = e.vectors.cwiseAbs().colwise().sum().maxCoeff() * Vinv.cwiseAbs().colwise().sum().maxCoeff();
    return d;
}

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("spectral measure: epsilon must be positive");
}

} // namespace

RationalSmoothingKernel rational_kernel(const std::vector<cplx>& poles) {
    const int m = static_cast<int>(poles.size());
    if (m < 1) throw InvalidInput("rational_kernel: need at least one pole");
    for (int j = 0; j < m; ++j) {
        if (!(poles[j].imag() > 0.0)) throw InvalidInput("rational_kernel: poles must lie in the upper half-plane");
        for (int k = 0; k < j; ++k)
            if (std::abs(poles[j] - poles[k]) == 0.0) throw InvalidInput("rational_kernel: repeated pole");
    }
    Mat V(m, m);
    for (int j = 0; j < m; ++j) {
        cplx p = 1.0;
        for (int k = 0; k < m; ++k) {
            V(k, j) = p;
            p *= poles[j];
        }
    }
    Vec rhs = Vec::Zero(m);
    rhs(0) = 1.0;
    Vec alpha = V.fullPivLu().solve(rhs);
    if (!alpha.allFinite()) throw NumericalError("rational_kernel: Vandermonde system is singular");
    RationalSmoothingKernel out;
    out.poles = poles;
    out.residues.assign(alpha.data(), alpha.data() + m);
    return out;
}

std::vector<cplx> default_poles(int m) {
    if (m < 1) throw InvalidInput("default_poles: order must be >= 1");
    std::vector<cplx> out;
    for (int j = 1; j <= m; ++j) out.emplace_back(2.0 * j / (m + 1) - 1.0, 1.0);
    return out;
}

NormalityReport check_normality(const GramTriple& gram, const CompressedBasis& basis) {
    NormalityReport r;
    const Mat& K = basis.khat_t;
    r.selfadjoint_defect = spectral_norm(K - K.adjoint());
    r.unitary_defect = spectral_norm(K.adjoint() * K - Mat::Identity(K.rows(), K.cols()));
    r.kernel_unitary_defect = (gram.R - gram.G).cwiseAbs().maxCoeff();
    r.kernel_selfadjoint_defect = (gram.A - gram.A.adjoint()).cwiseAbs().maxCoeff();
    return r;
}

MeasureSamples spectral_measure_selfadjoint(const Mat& khat_t, const Vec& g, const std::vector<double>& points,
                                            double epsilon, const RationalSmoothingKernel& kernel) {
    check_eps(epsilon);
    Decomposition d = decompose(khat_t, g, true);
    MeasureSamples s;
    s.points = points;
    s.epsilon = epsilon;
    s.observable = g;
    s.hermitian_path = d.hermitian;
    s.cond_V = d.cond;
    s.values.assign(points.size(), std::numeric_limits<double>::quiet_NaN());
    s.errors.assign(points.size(), std::string());
    std::vector<double> imag_ratio(points.size(), 0.0);
    const int m = kernel.order();
    parallel_for(points.size(), [&](std::size_t k) {
        const double x = points[k];
        // Stone-type assembly: (i/2pi)(S - S~) with S at the poles x - eps a_j and S~ at their conjugates.
        cplx S = 0.0, St = 0.0;
        for (int j = 0; j < m; ++j) {
            const cplx w = x - epsilon * kernel.poles[j];
            const cplx wt = x - epsilon * std::conj(kernel.poles[j]);
            cplx f = 0.0, ft = 0.0;
            for (Eigen::Index i = 0; i < d.lambda.size(); ++i) {
                const cplx den = d.lambda(i) - w, dent = d.lambda(i) - wt;
                if (std::abs(den) < kCollision || std::abs(dent) < kCollision) {
                    s.errors[k] = "pole collision at point " + format_double(x);
                    return;
                }
                f += d.q(i) / den;
                ft += d.q(i) / dent;
            }
            S += kernel.residues[j] * f;
            St += std::conj(kernel.residues[j]) * ft;
        }
        const cplx v = cplx(0.0, 1.0 / (2.0 * std::numbers::pi)) * (S - St);
        s.values[k] = v.real();
        imag_ratio[k] = std::fabs(v.imag()) / (std::fabs(v.real()) + 1e-12);
    });
    for (double r : imag_ratio) s.max_imag_ratio = std::max(s.max_imag_ratio, r);
    if (d.hermitian) {
        for (std::size_t k = 0; k < points.size(); ++k) {
            if (!s.errors[k].empty()) continue;
            const double re = s.values[k];
            if (imag_ratio[k] * (std::fabs(re) + 1e-12) > 1e-8 * std::fabs(re) + 1e-12)
                throw NumericalError("spectral measure: assembled value is not real for a self-adjoint matrix");
        }
    }
    return s;
}

MeasureSamples spectral_measure_unitary(const Mat& khat_t, const Vec& g, const std::vector<double>& thetas,
                                        double epsilon, const RationalSmoothingKernel& kernel) {
    check_eps(epsilon);
    Decomposition d = decompose(khat_t, g, false);
    MeasureSamples s;
    s.points = thetas;
    s.epsilon = epsilon;
    s.observable = g;
    s.cond_V = d.cond;
    s.values.assign(thetas.size(), std::numeric_limits<double>::quiet_NaN());
    s.errors.assign(thetas.size(), std::string());
    const int m = kernel.order();
    parallel_for(thetas.size(), [&](std::size_t k) {
        cplx S = 0.0;
        for (int j = 0; j < m; ++j) {
            const cplx z = std::exp(cplx(0.0, thetas[k]) - cplx(0.0, epsilon) * kernel.poles[j]);
            cplx f = 0.0;
            for (Eigen::Index i = 0; i < d.lambda.size(); ++i) {
                const cplx den = d.lambda(i) - z;
                if (std::abs(den) < kCollision) {
                    s.errors[k] = "pole collision at angle " + format_double(thetas[k]);
                    return;
                }
                f += d.q(i) * (d.lambda(i) + z) / den;
            }
            S += kernel.residues[j] * f;
        }
        s.values[k] = -S.real() / (2.0 * std::numbers::pi);
    });
    return s;
}

Vec orthogonal_to_constant(const Vec& c) {
    if (c.size() == 0) return c;
    return (c.array() - c.mean()).matrix();
}

std::string measure_csv(const MeasureSamples& s) {
    std::ostringstream os;
    os << "point,value\n";
    for (std::size_t k = 0; k < s.points.size(); ++k)
        os << format_double(s.points[k]) << ','
           << (std::isfinite(s.values[k]) ? format_double(s.values[k]) : std::string("nan")) << '\n';
    return os.str();
}

std::string measure_metadata_json(const MeasureSamples& s, const RationalSmoothingKernel& kernel,
                                  const std::string& type) {
    nlohmann::json j;
    j["type"] = type;
    j["epsilon"] = s.epsilon;
    j["m"] = kernel.order();
    for (std::size_t i = 0; i < kernel.poles.size(); ++i) {
        j["poles"].push_back({kernel.poles[i].real(), kernel.poles[i].imag()});
        j["residues"].push_back({kernel.residues[i].real(), kernel.residues[i].imag()});
    }
    j["observable_hash"] = hex64(fnv1a(s.observable.data(), static_cast<std::size_t>(s.observable.size()) * sizeof(cplx)));
    j["eigensolver"] = s.hermitian_path ? "hermitian" : "general";
    j["cond_V"] = s.cond_V;
    j["max_imag_ratio"] = s.max_imag_ratio;
    std::size_t failures = 0;
    for (const auto& e : s.errors)
        if (!e.empty()) ++failures;
    j["failed_points"] = failures;
    return j.dump(2) + "\n";
}

} // namespace specrkhs
