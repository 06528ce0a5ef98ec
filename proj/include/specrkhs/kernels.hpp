#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "specrkhs/types.hpp"

namespace specrkhs {

using Rational = boost::rational<std::int64_t>;

enum class KernelFamily {
    Matern,
    Wendland,
    GaussianRbf,
    SobolevH1Interval,
    HyperbolicGaussian,
    Polynomial,
    DiscreteDelta,
    WeightedSequence,
};

std::string family_name(KernelFamily f);

// Compactly supported Wendland piece p_{d,k} on [0,1], with exact coefficients
// (coeffs[l] multiplies r^l).
struct WendlandPolynomial {
    int d = 0;
    int k = 0;
    std::vector<Rational> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    // phi_{d,k}(r): p(r) on [0,1], zero beyond.
    double operator()(double r) const;
    double derivative(double r) const;
    Rational value_at(const Rational& r) const;
    Rational derivative_at_one(int order) const;
};

WendlandPolynomial wendland_polynomial(int d, int k);

class KernelSpec {
public:
    static KernelSpec matern(int d, int n, double sigma);
    static KernelSpec wendland(int d, int k, double sigma);
    static KernelSpec gaussian(int d, double sigma);
    static KernelSpec sobolev_h1(double a, double b);
    static KernelSpec hyperbolic_gaussian(double sigma);
    static KernelSpec polynomial(int d, double c, int degree);
    static KernelSpec discrete_delta(int d = 1);
    static KernelSpec weighted_sequence(double r);

    KernelFamily family() const { return family_; }
    int dim() const { return dim_; }
    double sigma() const { return sigma_; }
    int smoothness() const { return smoothness_; }
    double nu() const { return nu_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double offset() const { return c_; }
    int degree() const { return degree_; }
    double weight_exponent() const { return r_; }
    const WendlandPolynomial* wendland_piece() const { return wendland_ ? &*wendland_ : nullptr; }

    bool is_radial() const;
    bool complex_valued() const { return family_ == KernelFamily::Polynomial; }
    // Kernels of the form delta_xy * w(x); Gram assembly can use histograms for them.
    bool is_diagonal() const;
    double diagonal_weight(const Point& x) const;

    cplx operator()(const Point& x, const Point& y) const;
    // Skips the per-point domain checks; callers must have run check_point on both.
    cplx eval_unchecked(const Point& x, const Point& y) const;
    // Value of the radial profile at Euclidean distance r (radial families only).
    double radial(double r) const;
    void check_point(const Point& x) const;

    std::string to_string() const;

private:
    KernelSpec() = default;
    void validate() const;

    KernelFamily family_ = KernelFamily::GaussianRbf;
    int dim_ = 1;
    double sigma_ = 1.0;
    int smoothness_ = 0;
    double nu_ = 0.0;
    double a_ = 0.0, b_ = 1.0;
    double c_ = 1.0;
    int degree_ = 1;
    double r_ = 0.0;
    std::optional<WendlandPolynomial> wendland_;
    std::vector<double> wendland_coeffs_;
};

// Parses `family:key=value,...` (case-insensitive; unknown keys are rejected).
KernelSpec parse_kernel_spec(const std::string& text);

cplx eval_kernel(const KernelSpec& spec, const Point& x, const Point& y);

// C with |K(x,y) - K(x',y')| <= C (|x-x'| + |y-y'|); empty when no bound is implemented.
std::optional<double> kernel_lipschitz_constant(const KernelSpec& spec);

// Poincare-disk distance; both points must lie strictly inside the unit disk.
double poincare_distance(cplx x, cplx y);

} // namespace specrkhs
