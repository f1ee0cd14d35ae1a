#include <doctest.h>

#include <cmath>

#include "cframe/error.hpp"
#include "cframe/generators.hpp"
#include "cframe/hilbert_module.hpp"

using namespace cframe;

namespace {

ModuleDescriptor module(int n, Structure s, int k) { return {{n, s}, k}; }

AlgebraElement component_inner(const ModuleElement& x, const ModuleElement& y) {
  const int k = x.descriptor().rank;
  AlgebraElement acc = AlgebraElement::zero(x.descriptor().algebra);
  for (int j = 0; j < k; ++j) acc = acc + x.component(j) * adjoint(y.component(j));
  return acc;
}

// (x T)_i = sum_j x_j T_ji, evaluated component-wise.
ModuleElement component_apply(const ModuleOperator& t, const ModuleElement& x) {
  const ModuleDescriptor& d = x.descriptor();
  std::vector<AlgebraElement> out;
  for (int i = 0; i < d.rank; ++i) {
    AlgebraElement acc = AlgebraElement::zero(d.algebra);
    for (int j = 0; j < d.rank; ++j) acc = acc + x.component(j) * t.coeff(j, i);
    out.push_back(acc);
  }
  return ModuleElement::from_components(d, out);
}

}  // namespace

TEST_SUITE("hilbert_module") {

TEST_CASE("inner product on a hand example") {
  const ModuleDescriptor d = module(1, Structure::Full, 2);
  Matrix x(1, 2), y(1, 2);
  x << Complex(1, 1), 2.0;
  y << 3.0, Complex(0, 1);
  // (1+i)*3 + 2*conj(i) = 3 + 3i - 2i
  const auto ip = inner_product(ModuleElement(d, x), ModuleElement(d, y));
  CHECK(std::abs(ip(0, 0) - Complex(3, 1)) < 1e-15);
  CHECK(module_norm(ModuleElement(d, x)) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("inner product agrees with the component formula") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const ModuleDescriptor d = module(1 + trial % 4, trial % 3 ? Structure::Full : Structure::Diagonal, 1 + trial % 3);
    const auto x = gen::module_element(d, rng);
    const auto y = gen::module_element(d, rng);
    CHECK(max_abs_diff(inner_product(x, y), component_inner(x, y)) < 1e-12);
    CHECK(is_positive(inner_product(x, x)));
    CHECK(max_abs_diff(inner_product(y, x), adjoint(inner_product(x, y))) < 1e-12);
    const auto a = gen::algebra_element(d.algebra, rng);
    CHECK(max_abs_diff(inner_product(act(a, x), y), a * inner_product(x, y)) < 1e-11);
  }
}

TEST_CASE("A-valued norm squares to the inner product") {
  Rng rng(3);
  const ModuleDescriptor d = module(3, Structure::Full, 2);
  const auto x = gen::module_element(d, rng);
  const auto n = a_valued_norm(x);
  CHECK(max_abs_diff(n * n, inner_product(x, x)) < 1e-12);
  CHECK(operator_norm(n) == doctest::Approx(module_norm(x)).epsilon(1e-12));
}

TEST_CASE("operator coefficients follow the right-action layout") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const ModuleDescriptor d = module(1 + trial % 3, trial % 2 ? Structure::Full : Structure::Diagonal, 1 + trial % 3);
    std::vector<std::vector<AlgebraElement>> coeffs(d.rank);
    for (int j = 0; j < d.rank; ++j)
      for (int i = 0; i < d.rank; ++i) coeffs[j].push_back(gen::algebra_element(d.algebra, rng));
    const auto t = ModuleOperator::from_coeffs(d, coeffs);
    for (int j = 0; j < d.rank; ++j)
      for (int i = 0; i < d.rank; ++i) CHECK(max_abs_diff(t.coeff(j, i), coeffs[j][i]) == 0.0);
    const auto x = gen::module_element(d, rng);
    CHECK(max_abs_diff(apply(t, x), component_apply(t, x)) < 1e-12);
    const auto a = gen::algebra_element(d.algebra, rng);
    CHECK(max_abs_diff(apply(t, act(a, x)), act(a, apply(t, x))) < 1e-11);
  }
}

TEST_CASE("adjoint is the conjugate transpose and satisfies <Tx, y> = <x, T* y>") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const ModuleDescriptor d = module(1 + trial % 4, trial % 2 ? Structure::Full : Structure::Diagonal, 1 + trial % 3);
    const auto t = gen::module_operator(d, rng);
    const auto ta = op_adjoint(t);
    CHECK((ta.flattened() - t.flattened().adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const auto x = gen::module_element(d, rng);
    const auto y = gen::module_element(d, rng);
    CHECK(max_abs_diff(inner_product(apply(t, x), y), inner_product(x, apply(ta, y))) < 1e-10);
  }
}

TEST_CASE("compose applies its second argument first") {
  Rng rng(13);
  const ModuleDescriptor d = module(2, Structure::Full, 2);
  const auto t = gen::module_operator(d, rng);
  const auto u = gen::module_operator(d, rng);
  const auto x = gen::module_element(d, rng);
  CHECK(max_abs_diff(apply(compose(t, u), x), apply(t, apply(u, x))) < 1e-11);
}

TEST_CASE("operator positivity agrees with sampled forms") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ModuleDescriptor d = module(1 + trial % 3, Structure::Full, 1 + trial % 2);
    const auto p = gen::positive_operator(d, rng);
    CHECK(is_positive_operator(p));
    CHECK(is_self_adjoint(p));
    for (int s = 0; s < 20; ++s) {
      const auto x = gen::module_element(d, rng);
      CHECK(is_positive(inner_product(apply(p, x), x)));
    }
    const auto neg = op_scale(p, -1.0);
    if (op_norm(p) > 1e-6) CHECK_FALSE(is_positive_operator(neg));
  }
}

TEST_CASE("diagonal structure is enforced on operators") {
  const ModuleDescriptor d = module(2, Structure::Diagonal, 1);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(ModuleOperator(d, m), Error);
}

TEST_CASE("inverse, square root and GL+ certificate") {
  const ModuleDescriptor d = module(2, Structure::Diagonal, 1);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 4.0;
  m(1, 1) = 0.25;
  const ModuleOperator c(d, m);
  const auto cert = certify_gl_plus(c);
  CHECK(cert.eig_min() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(cert.eig_max() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(cert.sqrt_norm() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cert.inv_sqrt_norm() == doctest::Approx(2.0).epsilon(1e-14));
  const auto r = op_psd_sqrt(c);
  CHECK(op_max_abs_diff(compose(r, r), c) < 1e-14);
  CHECK(op_max_abs_diff(compose(op_invert(c), c), ModuleOperator::identity(d)) < 1e-14);

  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  const ModuleOperator singular(d, s);
  CHECK_FALSE(is_surjective(singular));
  CHECK_THROWS_AS(op_invert(singular), Error);
  try {
    certify_gl_plus(singular);
    FAIL("expected NotInGlPlus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInGlPlus);
  }
}

TEST_CASE("flat basis and flat vectors") {
  Rng rng(19);
  const ModuleDescriptor d = module(3, Structure::Full, 2);
  const auto t = gen::module_operator(d, rng);
  for (int c = 0; c < d.flat_size(); ++c) {
    const Matrix row = apply(t, ModuleElement::basis(d, c)).block_row();
    CHECK((row.row(c % d.dim()) - t.flattened().row(c)).cwiseAbs().maxCoeff() < 1e-15);
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d.flat_size());
  for (int i = 0; i < d.flat_size(); ++i) v(i) = rng.complex_normal();
  const auto x = ModuleElement::from_flat_vector(d, v);
  const auto p = gen::positive_operator(d, rng);
  const Complex form = (v.adjoint() * p.flattened() * v)(0, 0);
  const AlgebraElement ip = inner_product(apply(p, x), x);
  CHECK(std::abs(ip.entries().trace() - form) < 1e-10 * std::max(1.0, std::abs(form)));
}

}
