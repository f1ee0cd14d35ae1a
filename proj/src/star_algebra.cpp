#include "cframe/star_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "cframe/error.hpp"

namespace cframe {

namespace {

bool off_diagonal_is_zero(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

const char* to_string(Structure s) noexcept {
  return s == Structure::Full ? "full" : "diagonal";
}

std::string describe(const AlgebraDescriptor& d) {
  return std::string(to_string(d.structure)) + "(" + std::to_string(d.dim) + ")";
}

AlgebraElement::AlgebraElement(AlgebraDescriptor descriptor, Matrix entries)
    : descriptor_(descriptor), entries_(std::move(entries)) {
  if (descriptor_.dim < 1) fail(ErrorCode::InvalidArgument, "algebra dimension must be >= 1");
  if (entries_.rows() != descriptor_.dim || entries_.cols() != descriptor_.dim)
    fail(ErrorCode::InvalidArgument, "entries shape does not match " + describe(descriptor_));
  if (descriptor_.structure == Structure::Diagonal && !off_diagonal_is_zero(entries_))
    fail(ErrorCode::InvalidArgument, "diagonal algebra element has off-diagonal entries");
}

AlgebraElement AlgebraElement::zero(AlgebraDescriptor d) {
  return {d, Matrix::Zero(d.dim, d.dim)};
}

AlgebraElement AlgebraElement::identity(AlgebraDescriptor d) {
  return {d, Matrix::Identity(d.dim, d.dim)};
}

AlgebraElement AlgebraElement::scalar(AlgebraDescriptor d, Complex value) {
  return {d, value * Matrix::Identity(d.dim, d.dim)};
}

AlgebraElement AlgebraElement::diagonal(AlgebraDescriptor d, const std::vector<Complex>& values) {
  if (static_cast<int>(values.size()) != d.dim)
    fail(ErrorCode::InvalidArgument, "diagonal needs exactly dim values");
  Matrix m = Matrix::Zero(d.dim, d.dim);
  for (int i = 0; i < d.dim; ++i) m(i, i) = values[i];
  return {d, std::move(m)};
}

AlgebraElement AlgebraElement::projected(AlgebraDescriptor d, Matrix entries) {
  if (d.structure == Structure::Diagonal) {
    const Eigen::VectorXcd diag = entries.diagonal();
    entries = diag.asDiagonal();
  }
  return {d, std::move(entries)};
}

void require_same(const AlgebraDescriptor& a, const AlgebraDescriptor& b, const char* where) {
  if (!(a == b))
    fail(ErrorCode::DescriptorMismatch,
         std::string(where) + ": " + describe(a) + " vs " + describe(b));
}

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.descriptor(), b.descriptor(), "add");
  return {a.descriptor(), a.entries() + b.entries()};
}

AlgebraElement subtract(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.descriptor(), b.descriptor(), "subtract");
  return {a.descriptor(), a.entries() - b.entries()};
}

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.descriptor(), b.descriptor(), "mul");
  if (a.descriptor().structure == Structure::Diagonal) {
    const Eigen::VectorXcd prod = a.entries().diagonal().cwiseProduct(b.entries().diagonal());
    return {a.descriptor(), Matrix(prod.asDiagonal())};
  }
  return {a.descriptor(), a.entries() * b.entries()};
}

AlgebraElement scale(const AlgebraElement& a, Complex factor) {
  return {a.descriptor(), factor * a.entries()};
}

AlgebraElement adjoint(const AlgebraElement& a) {
  return {a.descriptor(), a.entries().adjoint()};
}

double operator_norm(const AlgebraElement& a) {
  if (a.descriptor().structure == Structure::Diagonal)
    return a.entries().diagonal().cwiseAbs().maxCoeff();
  return spectral::largest_singular_value(a.entries());
}

// For a diagonal element the eigenvalues are the diagonal itself, so the
// checks below read them off directly.

bool is_hermitian(const AlgebraElement& a, double tol) {
  if (a.descriptor().structure == Structure::Diagonal) {
    const double slack = tol * std::max(1.0, operator_norm(a));
    return 2.0 * a.entries().diagonal().imag().cwiseAbs().maxCoeff() <= slack;
  }
  return spectral::is_hermitian(a.entries(), tol);
}

bool is_positive(const AlgebraElement& a, double tol) {
  if (a.descriptor().structure == Structure::Diagonal) {
    const double slack = tol * std::max(1.0, operator_norm(a));
    return is_hermitian(a, tol) && a.entries().diagonal().real().minCoeff() >= -slack;
  }
  return spectral::is_psd(a.entries(), tol);
}

bool loewner_leq(const AlgebraElement& a, const AlgebraElement& b, double tol) {
  require_same(a.descriptor(), b.descriptor(), "loewner_leq");
  return is_positive(subtract(b, a), tol);
}

AlgebraElement psd_sqrt(const AlgebraElement& a, double tol) {
  if (!is_positive(a, tol)) fail(ErrorCode::NotPositive, "psd_sqrt of a non-positive element");
  if (a.descriptor().structure == Structure::Diagonal) {
    const Eigen::VectorXd roots = a.entries().diagonal().real().cwiseMax(0.0).cwiseSqrt();
    return {a.descriptor(), Matrix(roots.cast<Complex>().asDiagonal())};
  }
  return AlgebraElement::projected(a.descriptor(), spectral::psd_sqrt(a.entries()));
}

AlgebraElement invert(const AlgebraElement& a, double tol) {
  const double norm = operator_norm(a);
  if (a.descriptor().structure == Structure::Diagonal) {
    const Eigen::VectorXcd d = a.entries().diagonal();
    if (norm == 0.0 || d.cwiseAbs().minCoeff() <= tol * norm)
      fail(ErrorCode::Singular, "diagonal element has a (near-)zero entry");
    return {a.descriptor(), Matrix(d.cwiseInverse().asDiagonal())};
  }
  if (norm == 0.0 || spectral::smallest_singular_value(a.entries()) <= tol * norm)
    fail(ErrorCode::Singular, "element is numerically singular");
  return {a.descriptor(), a.entries().partialPivLu().inverse()};
}

AlgebraElement modulus(const AlgebraElement& a) {
  if (a.descriptor().structure == Structure::Diagonal)
    return {a.descriptor(), Matrix(a.entries().diagonal().cwiseAbs().cast<Complex>().asDiagonal())};
  const AlgebraElement square = mul(adjoint(a), a);
  return AlgebraElement::projected(a.descriptor(), spectral::psd_sqrt(square.entries()));
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.descriptor(), b.descriptor(), "max_abs_diff");
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

}  // namespace cframe
