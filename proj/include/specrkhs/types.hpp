#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace specrkhs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Point = Eigen::VectorXcd;

// Bad input: malformed specs, dimension mismatches, domain violations.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A well-posed request that failed numerically (indefinite pencil, degenerate direction, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTruncation = 1e-12;

bool is_real(const Mat& m);

} // namespace specrkhs
