#pragma once

// The matrix C*-algebra: either all of C^{n x n} or its diagonal
// (commutative) subalgebra.

#include <string>
#include <vector>

#include "cframe/spectral.hpp"

namespace cframe {

enum class Structure { Full, Diagonal };

const char* to_string(Structure s) noexcept;

struct AlgebraDescriptor {
  int dim = 1;
  Structure structure = Structure::Full;

  friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;
};

std::string describe(const AlgebraDescriptor& d);

class AlgebraElement {
 public:
  // Throws InvalidArgument on a wrong shape or on nonzero off-diagonal
  // entries under Structure::Diagonal.
  AlgebraElement(AlgebraDescriptor descriptor, Matrix entries);

  static AlgebraElement zero(AlgebraDescriptor d);
  static AlgebraElement identity(AlgebraDescriptor d);
  static AlgebraElement scalar(AlgebraDescriptor d, Complex value);
  static AlgebraElement diagonal(AlgebraDescriptor d, const std::vector<Complex>& values);

  // Drops off-diagonal entries when the descriptor is Diagonal. For results
  // that are diagonal mathematically but carry rounding noise.
  static AlgebraElement projected(AlgebraDescriptor d, Matrix entries);

  const AlgebraDescriptor& descriptor() const noexcept { return descriptor_; }
  const Matrix& entries() const noexcept { return entries_; }
  int dim() const noexcept { return descriptor_.dim; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  AlgebraDescriptor descriptor_;
  Matrix entries_;
};

void require_same(const AlgebraDescriptor& a, const AlgebraDescriptor& b, const char* where);

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement subtract(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(const AlgebraElement& a, Complex factor);
AlgebraElement adjoint(const AlgebraElement& a);

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) { return add(a, b); }
inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return subtract(a, b); }
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return mul(a, b); }
inline AlgebraElement operator*(Complex s, const AlgebraElement& a) { return scale(a, s); }

/// C*-norm: the largest singular value.
double operator_norm(const AlgebraElement& a);

bool is_hermitian(const AlgebraElement& a, double tol = kDefaultTol);

/// Hermitian within tol * max(1, ||a||) and no eigenvalue below
/// -tol * max(1, ||a||). Non-Hermitian input is simply not positive.
bool is_positive(const AlgebraElement& a, double tol = kDefaultTol);

/// a <= b in the Loewner order, i.e. b - a is positive.
bool loewner_leq(const AlgebraElement& a, const AlgebraElement& b, double tol = kDefaultTol);

/// Unique positive square root. Throws NotPositive when !is_positive(a, tol).
AlgebraElement psd_sqrt(const AlgebraElement& a, double tol = kDefaultTol);

/// Throws Singular when the smallest singular value is <= tol * ||a||.
AlgebraElement invert(const AlgebraElement& a, double tol = kDefaultTol);

/// |a| = (a* a)^{1/2}
AlgebraElement modulus(const AlgebraElement& a);

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);

}  // namespace cframe
