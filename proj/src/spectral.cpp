#include "cframe/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace cframe::spectral {

HermitianEigen hermitian_eigen(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double largest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double slack(const Matrix& m, double tol) {
  return tol * std::max(1.0, largest_singular_value(m));
}

bool is_hermitian(const Matrix& m, double tol) {
  return largest_singular_value(m - m.adjoint()) <= slack(m, tol);
}

bool is_psd(const Matrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  return hermitian_eigen(m).values(0) >= -slack(m, tol);
}

Matrix psd_sqrt(const Matrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  const RealVector roots = eig.values.unaryExpr([](double v) { return std::sqrt(std::max(v, 0.0)); });
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace cframe::spectral
