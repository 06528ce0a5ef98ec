#include "specrkhs/bessel.hpp"

#include <cmath>
#include <numbers>

#include "specrkhs/types.hpp"

namespace specrkhs {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// K_0 and K_1 from their ascending series; accurate for 0 < x <= 2.
void k01_series(double x, double& k0, double& k1) {
    const double q = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    double i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
    double term = 1.0;      // q^k / (k!)^2
    double harmonic = 0.0;  // H_k
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            term *= q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
        }
        i0 += term;
        s0 += term * harmonic;
        // q^k / (k! (k+1)!) and psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        const double t1 = term / (k + 1);
        i1 += t1;
        s1 += t1 * (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma);
        if (term < 1e-18 * i0 && k > 2) break;
    }
    i1 *= 0.5 * x;
    k0 = -(log_half + kEulerGamma) * i0 + s0;
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
}

// Steed's continued fraction (Temme's CF2 variant) for K_0, K_1; used for x > 2.
void k01_continued_fraction(double x, double& k0, double& k1) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < 1e-17) break;
    }
    h *= a1;
    k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

bool is_integer(double v) { return std::floor(v) == v; }

} // namespace

bool bessel_order_supported(double nu) { return nu >= 0.0 && is_integer(2.0 * nu); }

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw InvalidInput("bessel_k: argument must be positive");
    if (!bessel_order_supported(nu))
        throw InvalidInput("bessel_k: only integer and half-integer orders are supported");

    double lo, hi;  // K_{mu}, K_{mu+1} with mu = 0 or 1/2
    double mu;
    if (is_integer(nu)) {
        mu = 0.0;
        if (x <= 2.0) k01_series(x, lo, hi);
        else k01_continued_fraction(x, lo, hi);
    } else {
        mu = 0.5;
        lo = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
        hi = lo * (1.0 + 1.0 / x);
    }
    if (nu == mu) return lo;
    // K_{v+1} = K_{v-1} + (2v/x) K_v is stable in the upward direction.
    for (double v = mu + 1.0; v < nu; v += 1.0) {
        const double next = lo + (2.0 * v / x) * hi;
        lo = hi;
        hi = next;
    }
    return hi;
}

double matern_profile(double nu, double u) {
    if (u < 0.0) throw InvalidInput("matern_profile: negative radius");
    if (nu == 0.5) return std::exp(-u);
    if (u == 0.0) return 1.0;
    // For nu >= 1 the profile is 1 - O(u^2 log u), below double resolution here;
    // evaluating the product would overflow K_nu for tiny u.
    if (u < 1e-8) return 1.0;
    const double log_scale = (1.0 - nu) * std::numbers::ln2 - std::lgamma(nu);
    return std::exp(log_scale + nu * std::log(u)) * bessel_k(nu, u);
}

double matern_profile_derivative(double nu, double u) {
    if (u < 0.0) throw InvalidInput("matern_profile_derivative: negative radius");
    if (nu == 0.5) return -std::exp(-u);
    if (u == 0.0) return nu > 0.5 ? 0.0 : -1.0;
    // d/du [u^nu K_nu(u)] = -u^nu K_{nu-1}(u), with K_{-1/2} = K_{1/2}.
    const double lower = std::fabs(nu - 1.0);
    const double log_scale = (1.0 - nu) * std::numbers::ln2 - std::lgamma(nu);
    if (u < 1e-300) return 0.0;
    return -std::exp(log_scale + nu * std::log(u)) * bessel_k(lower, u);
}

} // namespace specrkhs
