#pragma once

// The standard Hilbert A-module H = A^k.
//
// An element x = (x_1, ..., x_k) is stored as the n x (n k) block row
// [x_1 x_2 ... x_k]; then <x, y> = X Y^H and the module action a.x is the
// left product a X. Operators act from the right, (xT)_i = sum_j x_j T_ji,
// so an operator is the (n k) x (n k) block matrix with block (j, i) equal
// to T_ji and apply(T, x) = X M. With that layout, A-linearity
// T(a.x) = a.T(x) holds identically for noncommutative A, the adjoint is
// the conjugate transpose of M, and T is positive iff M is PSD.

#include <vector>

#include "cframe/star_algebra.hpp"

namespace cframe {

struct ModuleDescriptor {
  AlgebraDescriptor algebra;
  int rank = 1;

  int dim() const noexcept { return algebra.dim; }
  int flat_size() const noexcept { return algebra.dim * rank; }

  friend bool operator==(const ModuleDescriptor&, const ModuleDescriptor&) = default;
};

std::string describe(const ModuleDescriptor& d);
void require_same(const ModuleDescriptor& a, const ModuleDescriptor& b, const char* where);

class ModuleElement {
 public:
  ModuleElement(ModuleDescriptor descriptor, Matrix block_row);

  static ModuleElement zero(ModuleDescriptor d);
  static ModuleElement from_components(ModuleDescriptor d, const std::vector<AlgebraElement>& components);
  // Rounding noise in structurally-zero positions is dropped.
  static ModuleElement projected(ModuleDescriptor d, Matrix block_row);

  // Unit element E_{c mod n, c}; the (n k) of them span H over C and
  // X M for X = basis(c) is row c of M placed in row (c mod n).
  static ModuleElement basis(ModuleDescriptor d, int flat_index);

  // Element whose form against any operator M reproduces v^H M v; used to
  // realise eigenvectors of a flattened operator as module elements.
  static ModuleElement from_flat_vector(ModuleDescriptor d, const Eigen::VectorXcd& v);

  const ModuleDescriptor& descriptor() const noexcept { return descriptor_; }
  const Matrix& block_row() const noexcept { return block_row_; }
  AlgebraElement component(int j) const;

 private:
  ModuleDescriptor descriptor_;
  Matrix block_row_;
};

ModuleElement add(const ModuleElement& x, const ModuleElement& y);
ModuleElement subtract(const ModuleElement& x, const ModuleElement& y);
ModuleElement scale(const ModuleElement& x, Complex factor);
/// Module action a.x
ModuleElement act(const AlgebraElement& a, const ModuleElement& x);

/// <x, y> = sum_j x_j y_j^*
AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y);
/// ||x|| = ||<x, x>||^{1/2}
double module_norm(const ModuleElement& x);
/// |x| = <x, x>^{1/2}
AlgebraElement a_valued_norm(const ModuleElement& x, double tol = kDefaultTol);
double max_abs_diff(const ModuleElement& x, const ModuleElement& y);

class ModuleOperator {
 public:
  // Validates the shape and, for a diagonal algebra, that every block is
  // diagonal.
  ModuleOperator(ModuleDescriptor descriptor, Matrix flattened);

  static ModuleOperator zero(ModuleDescriptor d);
  static ModuleOperator identity(ModuleDescriptor d);
  static ModuleOperator scalar(ModuleDescriptor d, Complex value);
  /// coeffs[j][i] is the algebra element T_ji.
  static ModuleOperator from_coeffs(ModuleDescriptor d, const std::vector<std::vector<AlgebraElement>>& coeffs);
  static ModuleOperator projected(ModuleDescriptor d, Matrix flattened);

  const ModuleDescriptor& descriptor() const noexcept { return descriptor_; }
  const Matrix& flattened() const noexcept { return flattened_; }
  AlgebraElement coeff(int j, int i) const;

 private:
  ModuleDescriptor descriptor_;
  Matrix flattened_;
};

ModuleElement apply(const ModuleOperator& t, const ModuleElement& x);
ModuleOperator op_adjoint(const ModuleOperator& t);
/// t o u: apply u first, then t.
ModuleOperator compose(const ModuleOperator& t, const ModuleOperator& u);
ModuleOperator op_add(const ModuleOperator& t, const ModuleOperator& u);
ModuleOperator op_subtract(const ModuleOperator& t, const ModuleOperator& u);
ModuleOperator op_scale(const ModuleOperator& t, Complex factor);
double op_norm(const ModuleOperator& t);
double op_max_abs_diff(const ModuleOperator& t, const ModuleOperator& u);

bool is_self_adjoint(const ModuleOperator& t, double tol = kDefaultTol);
bool is_positive_operator(const ModuleOperator& t, double tol = kDefaultTol);
/// Full rank of the flattening: sigma_min > tol * ||T||.
bool is_surjective(const ModuleOperator& t, double tol = kDefaultTol);
/// Throws Singular.
ModuleOperator op_invert(const ModuleOperator& t, double tol = kDefaultTol);
/// Throws NotPositive.
ModuleOperator op_psd_sqrt(const ModuleOperator& t, double tol = kDefaultTol);

/// Membership certificate for GL+(H): positive, bounded, invertible.
/// Only certify_gl_plus() issues one.
class GlPlusCertificate {
 public:
  const ModuleOperator& op() const noexcept { return op_; }
  const ModuleDescriptor& descriptor() const noexcept { return op_.descriptor(); }
  double eig_min() const noexcept { return eig_min_; }
  double eig_max() const noexcept { return eig_max_; }
  /// ||C^{1/2}||
  double sqrt_norm() const;
  /// ||C^{-1/2}||
  double inv_sqrt_norm() const;

 private:
  friend GlPlusCertificate certify_gl_plus(const ModuleOperator& t, double tol);
  GlPlusCertificate(ModuleOperator op, double eig_min, double eig_max)
      : op_(std::move(op)), eig_min_(eig_min), eig_max_(eig_max) {}

  ModuleOperator op_;
  double eig_min_;
  double eig_max_;
};

/// Throws NotInGlPlus for non-Hermitian input or eig_min <= tol.
GlPlusCertificate certify_gl_plus(const ModuleOperator& t, double tol = kDefaultTol);

}  // namespace cframe
