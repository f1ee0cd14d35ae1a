#include "cframe/hilbert_module.hpp"

#include <cmath>

#include "cframe/error.hpp"

namespace cframe {

namespace {

// Under a diagonal algebra every n x n block must itself be diagonal.
bool blocks_are_diagonal(const Matrix& m, int n) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r % n != c % n && m(r, c) != Complex(0.0, 0.0)) return false;
  return true;
}

void zero_off_block_diagonals(Matrix& m, int n) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r % n != c % n) m(r, c) = 0.0;
}

void validate_descriptor(const ModuleDescriptor& d) {
  if (d.algebra.dim < 1) fail(ErrorCode::InvalidArgument, "algebra dimension must be >= 1");
  if (d.rank < 1) fail(ErrorCode::InvalidArgument, "module rank must be >= 1");
}

}  // namespace

std::string describe(const ModuleDescriptor& d) {
  return describe(d.algebra) + "^" + std::to_string(d.rank);
}

void require_same(const ModuleDescriptor& a, const ModuleDescriptor& b, const char* where) {
  if (!(a == b))
    fail(ErrorCode::DescriptorMismatch,
         std::string(where) + ": " + describe(a) + " vs " + describe(b));
}

// ---------------------------------------------------------------- elements

ModuleElement::ModuleElement(ModuleDescriptor descriptor, Matrix block_row)
    : descriptor_(descriptor), block_row_(std::move(block_row)) {
  validate_descriptor(descriptor_);
  if (block_row_.rows() != descriptor_.dim() || block_row_.cols() != descriptor_.flat_size())
    fail(ErrorCode::InvalidArgument, "block row shape does not match " + describe(descriptor_));
  if (descriptor_.algebra.structure == Structure::Diagonal &&
      !blocks_are_diagonal(block_row_, descriptor_.dim()))
    fail(ErrorCode::InvalidArgument, "module element has off-diagonal entries over a diagonal algebra");
}

ModuleElement ModuleElement::zero(ModuleDescriptor d) {
  validate_descriptor(d);
  return {d, Matrix::Zero(d.dim(), d.flat_size())};
}

ModuleElement ModuleElement::from_components(ModuleDescriptor d,
                                             const std::vector<AlgebraElement>& components) {
  validate_descriptor(d);
  if (static_cast<int>(components.size()) != d.rank)
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(d.rank) + " components");
  Matrix row(d.dim(), d.flat_size());
  for (int j = 0; j < d.rank; ++j) {
    require_same(components[j].descriptor(), d.algebra, "module component");
    row.middleCols(j * d.dim(), d.dim()) = components[j].entries();
  }
  return {d, std::move(row)};
}

ModuleElement ModuleElement::projected(ModuleDescriptor d, Matrix block_row) {
  if (d.algebra.structure == Structure::Diagonal) zero_off_block_diagonals(block_row, d.dim());
  return {d, std::move(block_row)};
}

ModuleElement ModuleElement::basis(ModuleDescriptor d, int flat_index) {
  validate_descriptor(d);
  if (flat_index < 0 || flat_index >= d.flat_size())
    fail(ErrorCode::InvalidArgument, "basis index out of range");
  Matrix row = Matrix::Zero(d.dim(), d.flat_size());
  row(flat_index % d.dim(), flat_index) = 1.0;
  return {d, std::move(row)};
}

ModuleElement ModuleElement::from_flat_vector(ModuleDescriptor d, const Eigen::VectorXcd& v) {
  validate_descriptor(d);
  if (v.size() != d.flat_size()) fail(ErrorCode::InvalidArgument, "flat vector has wrong length");
  Matrix row = Matrix::Zero(d.dim(), d.flat_size());
  for (int c = 0; c < d.flat_size(); ++c) {
    const int r = d.algebra.structure == Structure::Diagonal ? c % d.dim() : 0;
    row(r, c) = std::conj(v(c));
  }
  return {d, std::move(row)};
}

AlgebraElement ModuleElement::component(int j) const {
  if (j < 0 || j >= descriptor_.rank) fail(ErrorCode::InvalidArgument, "component index out of range");
  return {descriptor_.algebra, block_row_.middleCols(j * descriptor_.dim(), descriptor_.dim())};
}

ModuleElement add(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "add");
  return {x.descriptor(), x.block_row() + y.block_row()};
}

ModuleElement subtract(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "subtract");
  return {x.descriptor(), x.block_row() - y.block_row()};
}

ModuleElement scale(const ModuleElement& x, Complex factor) {
  return {x.descriptor(), factor * x.block_row()};
}

ModuleElement act(const AlgebraElement& a, const ModuleElement& x) {
  require_same(a.descriptor(), x.descriptor().algebra, "act");
  if (x.descriptor().algebra.structure == Structure::Diagonal) {
    const int n = x.descriptor().dim();
    Matrix row = Matrix::Zero(n, x.descriptor().flat_size());
    for (int c = 0; c < row.cols(); ++c) row(c % n, c) = a(c % n, c % n) * x.block_row()(c % n, c);
    return {x.descriptor(), std::move(row)};
  }
  return ModuleElement::projected(x.descriptor(), a.entries() * x.block_row());
}

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "inner_product");
  if (x.descriptor().algebra.structure == Structure::Diagonal) {
    const int n = x.descriptor().dim();
    Matrix out = Matrix::Zero(n, n);
    for (int c = 0; c < x.descriptor().flat_size(); ++c)
      out(c % n, c % n) += x.block_row()(c % n, c) * std::conj(y.block_row()(c % n, c));
    return {x.descriptor().algebra, std::move(out)};
  }
  return AlgebraElement::projected(x.descriptor().algebra, x.block_row() * y.block_row().adjoint());
}

double module_norm(const ModuleElement& x) {
  return std::sqrt(operator_norm(inner_product(x, x)));
}

AlgebraElement a_valued_norm(const ModuleElement& x, double tol) {
  return psd_sqrt(inner_product(x, x), tol);
}

double max_abs_diff(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "max_abs_diff");
  return (x.block_row() - y.block_row()).cwiseAbs().maxCoeff();
}

// --------------------------------------------------------------- operators

ModuleOperator::ModuleOperator(ModuleDescriptor descriptor, Matrix flattened)
    : descriptor_(descriptor), flattened_(std::move(flattened)) {
  validate_descriptor(descriptor_);
  const int size = descriptor_.flat_size();
  if (flattened_.rows() != size || flattened_.cols() != size)
    fail(ErrorCode::InvalidArgument, "operator shape does not match " + describe(descriptor_));
  if (descriptor_.algebra.structure == Structure::Diagonal &&
      !blocks_are_diagonal(flattened_, descriptor_.dim()))
    fail(ErrorCode::InvalidArgument, "operator block is not in the diagonal algebra");
}

ModuleOperator ModuleOperator::zero(ModuleDescriptor d) {
  validate_descriptor(d);
  return {d, Matrix::Zero(d.flat_size(), d.flat_size())};
}

ModuleOperator ModuleOperator::identity(ModuleDescriptor d) {
  validate_descriptor(d);
  return {d, Matrix::Identity(d.flat_size(), d.flat_size())};
}

ModuleOperator ModuleOperator::scalar(ModuleDescriptor d, Complex value) {
  validate_descriptor(d);
  return {d, value * Matrix::Identity(d.flat_size(), d.flat_size())};
}

ModuleOperator ModuleOperator::from_coeffs(ModuleDescriptor d,
                                           const std::vector<std::vector<AlgebraElement>>& coeffs) {
  validate_descriptor(d);
  if (static_cast<int>(coeffs.size()) != d.rank)
    fail(ErrorCode::InvalidArgument, "operator needs rank x rank coefficients");
  const int n = d.dim();
  Matrix m(d.flat_size(), d.flat_size());
  for (int j = 0; j < d.rank; ++j) {
    if (static_cast<int>(coeffs[j].size()) != d.rank)
      fail(ErrorCode::InvalidArgument, "operator needs rank x rank coefficients");
    for (int i = 0; i < d.rank; ++i) {
      require_same(coeffs[j][i].descriptor(), d.algebra, "operator coefficient");
      m.block(j * n, i * n, n, n) = coeffs[j][i].entries();
    }
  }
  return {d, std::move(m)};
}

ModuleOperator ModuleOperator::projected(ModuleDescriptor d, Matrix flattened) {
  if (d.algebra.structure == Structure::Diagonal) zero_off_block_diagonals(flattened, d.dim());
  return {d, std::move(flattened)};
}

AlgebraElement ModuleOperator::coeff(int j, int i) const {
  if (j < 0 || i < 0 || j >= descriptor_.rank || i >= descriptor_.rank)
    fail(ErrorCode::InvalidArgument, "coefficient index out of range");
  const int n = descriptor_.dim();
  return {descriptor_.algebra, flattened_.block(j * n, i * n, n, n)};
}

ModuleElement apply(const ModuleOperator& t, const ModuleElement& x) {
  require_same(t.descriptor(), x.descriptor(), "apply");
  if (x.descriptor().algebra.structure == Structure::Diagonal) {
    // (x T) at (p, i n + p) = sum_j x(p, j n + p) T(j n + p, i n + p)
    const int n = x.descriptor().dim(), k = x.descriptor().rank;
    const Matrix& m = t.flattened();
    Matrix row = Matrix::Zero(n, x.descriptor().flat_size());
    for (int p = 0; p < n; ++p)
      for (int i = 0; i < k; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < k; ++j) acc += x.block_row()(p, j * n + p) * m(j * n + p, i * n + p);
        row(p, i * n + p) = acc;
      }
    return {x.descriptor(), std::move(row)};
  }
  return ModuleElement::projected(x.descriptor(), x.block_row() * t.flattened());
}

ModuleOperator op_adjoint(const ModuleOperator& t) {
  return {t.descriptor(), t.flattened().adjoint()};
}

ModuleOperator compose(const ModuleOperator& t, const ModuleOperator& u) {
  require_same(t.descriptor(), u.descriptor(), "compose");
  return ModuleOperator::projected(t.descriptor(), u.flattened() * t.flattened());
}

ModuleOperator op_add(const ModuleOperator& t, const ModuleOperator& u) {
  require_same(t.descriptor(), u.descriptor(), "op_add");
  return {t.descriptor(), t.flattened() + u.flattened()};
}

ModuleOperator op_subtract(const ModuleOperator& t, const ModuleOperator& u) {
  require_same(t.descriptor(), u.descriptor(), "op_subtract");
  return {t.descriptor(), t.flattened() - u.flattened()};
}

ModuleOperator op_scale(const ModuleOperator& t, Complex factor) {
  return {t.descriptor(), factor * t.flattened()};
}

double op_norm(const ModuleOperator& t) {
  return spectral::largest_singular_value(t.flattened());
}

double op_max_abs_diff(const ModuleOperator& t, const ModuleOperator& u) {
  require_same(t.descriptor(), u.descriptor(), "op_max_abs_diff");
  return (t.flattened() - u.flattened()).cwiseAbs().maxCoeff();
}

bool is_self_adjoint(const ModuleOperator& t, double tol) {
  return spectral::is_hermitian(t.flattened(), tol);
}

bool is_positive_operator(const ModuleOperator& t, double tol) {
  return spectral::is_psd(t.flattened(), tol);
}

bool is_surjective(const ModuleOperator& t, double tol) {
  const double norm = op_norm(t);
  return norm > 0.0 && spectral::smallest_singular_value(t.flattened()) > tol * norm;
}

ModuleOperator op_invert(const ModuleOperator& t, double tol) {
  if (!is_surjective(t, tol)) fail(ErrorCode::Singular, "operator is numerically singular");
  return ModuleOperator::projected(t.descriptor(), t.flattened().partialPivLu().inverse());
}

ModuleOperator op_psd_sqrt(const ModuleOperator& t, double tol) {
  if (!is_positive_operator(t, tol)) fail(ErrorCode::NotPositive, "op_psd_sqrt of a non-positive operator");
  return ModuleOperator::projected(t.descriptor(), spectral::psd_sqrt(t.flattened()));
}

double GlPlusCertificate::sqrt_norm() const { return std::sqrt(eig_max_); }

double GlPlusCertificate::inv_sqrt_norm() const { return 1.0 / std::sqrt(eig_min_); }

GlPlusCertificate certify_gl_plus(const ModuleOperator& t, double tol) {
  if (!is_self_adjoint(t, tol)) fail(ErrorCode::NotInGlPlus, "controller is not self-adjoint");
  const auto eig = spectral::hermitian_eigen(t.flattened());
  const double lo = eig.values(0);
  const double hi = eig.values(eig.values.size() - 1);
  if (!(lo > tol))
    fail(ErrorCode::NotInGlPlus, "controller smallest eigenvalue " + std::to_string(lo) + " is not > tol");
  return {t, lo, hi};
}

}  // namespace cframe
