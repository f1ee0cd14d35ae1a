#include <doctest.h>

#include <cmath>

#include "cframe/error.hpp"
#include "cframe/generators.hpp"
#include "cframe/star_algebra.hpp"

using namespace cframe;

namespace {

const AlgebraDescriptor kFull2{2, Structure::Full};
const AlgebraDescriptor kDiag3{3, Structure::Diagonal};

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("star_algebra") {

TEST_CASE("diagonal structure rejects off-diagonal entries") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 2) = 1e-3;
  CHECK(error_of([&] { AlgebraElement(kDiag3, m); }) == ErrorCode::InvalidArgument);
  CHECK(AlgebraElement::projected(kDiag3, m)(0, 2) == Complex(0.0));
}

TEST_CASE("wrong shape is rejected") {
  CHECK(error_of([] { AlgebraElement(kFull2, Matrix::Identity(3, 3)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mixed descriptors are rejected") {
  const auto a = AlgebraElement::identity(kFull2);
  const auto b = AlgebraElement::identity({2, Structure::Diagonal});
  CHECK(error_of([&] { (void)(a + b); }) == ErrorCode::DescriptorMismatch);
  CHECK(error_of([&] { (void)(a * b); }) == ErrorCode::DescriptorMismatch);
}

TEST_CASE("arithmetic matches matrix arithmetic") {
  const AlgebraElement a(kFull2, mat2({1, 2}, 3, {0, -1}, 4));
  const AlgebraElement b(kFull2, mat2(2, {0, 1}, 1, -1));
  CHECK(max_abs_diff(a * b, AlgebraElement(kFull2, a.entries() * b.entries())) == 0.0);
  CHECK(max_abs_diff(adjoint(a), AlgebraElement(kFull2, mat2({1, -2}, {0, 1}, 3, 4))) == 0.0);
  CHECK(max_abs_diff(Complex(2, 0) * a - a, a) == 0.0);
}

TEST_CASE("operator norm of a diagonal element is its largest modulus") {
  const auto a = AlgebraElement::diagonal(kDiag3, {3.0, Complex(0, -4), 1.0});
  CHECK(operator_norm(a) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("operator norm of a 2x2 matrix") {
  // [[1,1],[0,1]] has singular values (sqrt5 +- 1) / 2
  const AlgebraElement a(kFull2, mat2(1, 1, 0, 1));
  CHECK(operator_norm(a) == doctest::Approx((std::sqrt(5.0) + 1.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("positive square root of a known matrix") {
  // [[2,1],[1,2]]^2 = [[5,4],[4,5]]
  const AlgebraElement a(kFull2, mat2(5, 4, 4, 5));
  const auto r = psd_sqrt(a);
  CHECK(max_abs_diff(r, AlgebraElement(kFull2, mat2(2, 1, 1, 2))) < 1e-14);
  CHECK(is_positive(r));
}

TEST_CASE("square root of a non-positive element throws") {
  const auto a = AlgebraElement::diagonal(kDiag3, {1.0, -0.5, 2.0});
  CHECK(error_of([&] { psd_sqrt(a); }) == ErrorCode::NotPositive);
}

TEST_CASE("positivity respects the relative slack") {
  CHECK(is_positive(AlgebraElement::diagonal(kDiag3, {1e6, -1e-4, 1.0})));
  CHECK_FALSE(is_positive(AlgebraElement::diagonal(kDiag3, {1.0, -1e-6, 1.0})));
  CHECK_FALSE(is_positive(AlgebraElement(kFull2, mat2(1, 1, 0, 1))));
}

TEST_CASE("Loewner order") {
  const auto a = AlgebraElement::diagonal(kDiag3, {1.0, 2.0, 3.0});
  const auto b = AlgebraElement::diagonal(kDiag3, {1.0, 2.5, 3.0});
  CHECK(loewner_leq(a, b));
  CHECK_FALSE(loewner_leq(b, a));
  const AlgebraElement c(kFull2, mat2(2, 1, 1, 2));
  CHECK(loewner_leq(AlgebraElement::identity(kFull2), c));
  CHECK_FALSE(loewner_leq(AlgebraElement::scalar(kFull2, 1.5), c));
}

TEST_CASE("inverse and singular elements") {
  const AlgebraElement a(kFull2, mat2(4, 7, 2, 6));
  const auto inv = invert(a);
  CHECK(max_abs_diff(inv, AlgebraElement(kFull2, mat2(0.6, -0.7, -0.2, 0.4))) < 1e-14);
  CHECK(error_of([] { invert(AlgebraElement(kFull2, mat2(1, 2, 2, 4))); }) == ErrorCode::Singular);
}

TEST_CASE("modulus squares to a* a") {
  const AlgebraElement a(kFull2, mat2({1, 1}, 2, 0, {0, 3}));
  const auto m = modulus(a);
  CHECK(max_abs_diff(m * m, adjoint(a) * a) < 1e-13);
}

TEST_CASE("C* identity and submultiplicativity on random elements") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const AlgebraDescriptor d{1 + trial % 4, trial % 2 ? Structure::Full : Structure::Diagonal};
    const auto a = gen::algebra_element(d, rng);
    const auto b = gen::algebra_element(d, rng);
    const double na = operator_norm(a);
    CHECK(operator_norm(adjoint(a) * a) == doctest::Approx(na * na).epsilon(1e-12));
    CHECK(operator_norm(a * b) <= na * operator_norm(b) * (1 + 1e-12));
    const auto p = adjoint(a) * a;
    const auto r = psd_sqrt(p);
    CHECK(max_abs_diff(r * r, p) <= 1e-12 * std::max(1.0, operator_norm(p)));
    const auto h = gen::hermitian_element(d, rng);
    CHECK(is_hermitian(h));
  }
}

}
