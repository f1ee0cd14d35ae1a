#include "cframe/generators.hpp"

namespace cframe::gen {

namespace {

Matrix structured_normal(int rows, int cols, int n, Structure s, Rng& rng) {
  Matrix m = Matrix::Zero(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      if (s == Structure::Full || r % n == c % n) m(r, c) = rng.complex_normal();
  return m;
}

}  // namespace

AlgebraElement algebra_element(const AlgebraDescriptor& d, Rng& rng) {
  return {d, structured_normal(d.dim, d.dim, d.dim, d.structure, rng)};
}

AlgebraElement hermitian_element(const AlgebraDescriptor& d, Rng& rng) {
  const Matrix m = structured_normal(d.dim, d.dim, d.dim, d.structure, rng);
  return {d, 0.5 * (m + m.adjoint())};
}

ModuleElement module_element(const ModuleDescriptor& d, Rng& rng) {
  return {d, structured_normal(d.dim(), d.flat_size(), d.dim(), d.algebra.structure, rng)};
}

ModuleOperator module_operator(const ModuleDescriptor& d, Rng& rng) {
  return {d, structured_normal(d.flat_size(), d.flat_size(), d.dim(), d.algebra.structure, rng)};
}

ModuleOperator positive_operator(const ModuleDescriptor& d, Rng& rng) {
  const ModuleOperator r = module_operator(d, rng);
  return compose(op_adjoint(r), r);
}

ModuleOperator invertible_operator(const ModuleDescriptor& d, Rng& rng) {
  const ModuleOperator r = module_operator(d, rng);
  const double shift = op_norm(r) + 1.0;
  return op_add(r, ModuleOperator::scalar(d, shift));
}

}  // namespace cframe::gen
