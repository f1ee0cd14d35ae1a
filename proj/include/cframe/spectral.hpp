#pragma once

// Dense Hermitian spectral primitives shared by the algebra and operator
// layers. Every root, extreme eigenvalue and positivity verdict on a
// Hermitian matrix goes through hermitian_eigen().

#include <complex>

#include <Eigen/Dense>

namespace cframe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

namespace spectral {

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns, orthonormal
};

// Eigendecomposition of the Hermitian part (M + M^H) / 2.
HermitianEigen hermitian_eigen(const Matrix& m);

double largest_singular_value(const Matrix& m);
double smallest_singular_value(const Matrix& m);

// Slack used by all tolerance checks: tol * max(1, ||m||).
double slack(const Matrix& m, double tol);

bool is_hermitian(const Matrix& m, double tol);

// Hermitian within slack and every eigenvalue >= -slack.
bool is_psd(const Matrix& m, double tol);

// Positive root of a PSD matrix; eigenvalues in [-slack, 0) are clamped.
// Caller checks is_psd first.
Matrix psd_sqrt(const Matrix& m);

}  // namespace spectral
}  // namespace cframe
