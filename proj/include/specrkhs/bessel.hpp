#pragma once

namespace specrkhs {

// Modified Bessel function of the second kind K_nu(x), x > 0, for integer and
// half-integer orders nu >= 0. Integer orders start from K_0, K_1 (power series for
// x <= 2, Steed's continued fraction beyond) and recur upward; half-integer orders
// recur from the closed form of K_{1/2}.
double bessel_k(double nu, double x);

// True when 2*nu is a nonnegative integer, i.e. bessel_k supports nu.
bool bessel_order_supported(double nu);

// Matern profile normalised to 1 at the origin: 2^{1-nu}/Gamma(nu) * u^nu * K_nu(u).
double matern_profile(double nu, double u);

// Derivative of matern_profile with respect to u (nonpositive).
double matern_profile_derivative(double nu, double u);

} // namespace specrkhs
