#include <doctest.h>

#include <cmath>

#include "cframe/error.hpp"
#include "cframe/generators.hpp"
#include "cframe/scenario.hpp"

using namespace cframe;

namespace {

FrameFamily example1_family(int nodes) {
  const ModuleDescriptor d{{2, Structure::Diagonal}, 1};
  return FrameFamily::sample(d, gauss_legendre(0.0, 1.0, nodes), [&](std::size_t, double w) {
    return ModuleElement::from_components(d, {AlgebraElement::diagonal(d.algebra, {w, w / 2.0})});
  });
}

FrameFamily random_family(const ModuleDescriptor& d, int nodes, Rng& rng) {
  return FrameFamily::sample(d, trapezoid(0.0, 1.0, nodes),
                             [&](std::size_t, double) { return gen::module_element(d, rng); });
}

// sum_i mu_i F_i^H (C F_i), straight from the block-row layout.
Matrix oracle_operator(const FrameFamily& f, const Matrix& c) {
  const int m = f.module().flat_size();
  Matrix acc = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Matrix& x = f.vectors()[i].block_row();
    acc += f.space().weights()[i] * x.adjoint() * (x * c);
  }
  return acc;
}

GlPlusCertificate scalar_controller(const ModuleDescriptor& d, double alpha) {
  return certify_gl_plus(ModuleOperator::scalar(d, alpha));
}

// Controller c0 I + c1 S / ||S||, which commutes with S.
GlPlusCertificate polynomial_controller(const FrameFamily& f, double c0, double c1) {
  const ModuleOperator s = frame_operator(f);
  const Matrix p = c0 * Matrix::Identity(s.flattened().rows(), s.flattened().cols()) +
                   (c1 / op_norm(s)) * s.flattened();
  return certify_gl_plus(ModuleOperator::projected(f.module(), 0.5 * (p + p.adjoint())));
}

}  // namespace

TEST_SUITE("frames") {

TEST_CASE("example 1 controlled frame operator is diag(alpha/3, alpha/12)") {
  for (double alpha : {0.5, 1.0, 3.0}) {
    for (int nodes : {2, 3, 16}) {
      const auto f = example1_family(nodes);
      const auto c = scalar_controller(f.module(), alpha);
      const auto r = is_controlled_frame(f, c);
      REQUIRE(r.is_frame);
      const Matrix& m = r.op.flattened();
      CHECK(std::abs(m(0, 0) - alpha / 3.0) <= 1e-12);
      CHECK(std::abs(m(1, 1) - alpha / 12.0) <= 1e-12);
      CHECK(std::abs(m(0, 1)) == 0.0);
      CHECK(r.bounds.lower == doctest::Approx(alpha / 12.0).epsilon(1e-10));
      CHECK(r.bounds.upper == doctest::Approx(alpha / 3.0).epsilon(1e-10));
      CHECK(r.tightness == Tightness::General);
    }
  }
}

TEST_CASE("frame operator matches the direct sum and analysis-synthesis") {
  Rng rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const ModuleDescriptor d{{1 + trial % 3, trial % 2 ? Structure::Full : Structure::Diagonal}, 1 + trial % 3};
    const auto f = random_family(d, 2 * d.flat_size() + 2, rng);
    const auto s = frame_operator(f);
    CHECK((s.flattened() - oracle_operator(f, Matrix::Identity(d.flat_size(), d.flat_size()))).cwiseAbs().maxCoeff() <
          1e-12);
    const auto x = gen::module_element(d, rng);
    CHECK(max_abs_diff(apply(s, x), synthesis(f, analysis(f, x))) < 1e-11);

    const auto c = polynomial_controller(f, 0.7, 0.4);
    const auto sc = controlled_frame_operator(f, c);
    CHECK((sc.flattened() - oracle_operator(f, c.op().flattened())).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(op_max_abs_diff(sc, compose(c.op(), s)) < 1e-11);
    CHECK(max_abs_diff(apply(sc, x), controlled_synthesis(f, c, analysis(f, x))) < 1e-11);
  }
}

TEST_CASE("optimal bounds are the planted extreme eigenvalues") {
  // F_i = sqrt(lambda_i) E_ii over a counting measure gives S = diag(lambda).
  const std::vector<double> lambda = {0.5, 2.0, 1.25, 3.5};
  const ModuleDescriptor d{{4, Structure::Diagonal}, 1};
  std::vector<ModuleElement> vectors;
  for (int i = 0; i < 4; ++i) {
    Matrix m = Matrix::Zero(4, 4);
    m(i, i) = std::sqrt(lambda[i]);
    vectors.emplace_back(d, m);
  }
  const FrameFamily f(d, counting(4), vectors);
  const auto r = is_controlled_frame(f, identity_controller(d));
  REQUIRE(r.is_frame);
  CHECK(r.bounds.lower == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.bounds.upper == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(sandwich_holds(r.op, r.bounds));
  CHECK_FALSE(sandwich_holds(r.op, {0.5 * (1 + 1e-6), 3.5}));
  CHECK_FALSE(sandwich_holds(r.op, {0.5, 3.5 * (1 - 1e-6)}));
}

TEST_CASE("tight and Parseval classification") {
  const ModuleDescriptor d{{2, Structure::Diagonal}, 1};
  std::vector<ModuleElement> vectors;
  for (int i = 0; i < 2; ++i) {
    Matrix m = Matrix::Zero(2, 2);
    m(i, i) = 1.0;
    vectors.emplace_back(d, m);
  }
  const FrameFamily f(d, counting(2), vectors);
  CHECK(is_controlled_frame(f, identity_controller(d)).tightness == Tightness::Parseval);
  CHECK(is_controlled_frame(f, scalar_controller(d, 2.0)).tightness == Tightness::Tight);
}

TEST_CASE("a family that misses a direction is not a frame") {
  const ModuleDescriptor d{{2, Structure::Diagonal}, 1};
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  const FrameFamily f(d, counting(1), {ModuleElement(d, m)});
  const auto r = is_controlled_frame(f, identity_controller(d));
  CHECK_FALSE(r.is_frame);
  CHECK_FALSE(r.diagnostics.invertible);
  CHECK_THROWS_AS(reconstruct(f, identity_controller(d), ModuleElement(d, m), 1e-10), Error);
}

TEST_CASE("a controller that does not commute with S breaks self-adjointness") {
  const ModuleDescriptor d{{1, Structure::Full}, 2};
  std::vector<ModuleElement> vectors;
  Matrix a(1, 2), b(1, 2);
  a << 1.0, 0.0;
  b << 0.0, 2.0;
  vectors.emplace_back(d, a);
  vectors.emplace_back(d, b);
  const FrameFamily f(d, counting(2), vectors);
  Matrix c(2, 2);
  c << 2.0, 1.0, 1.0, 2.0;
  const auto r = is_controlled_frame(f, certify_gl_plus(ModuleOperator(d, c)));
  CHECK_FALSE(r.is_frame);
  CHECK_FALSE(r.diagnostics.self_adjoint);
  CHECK(r.diagnostics.hermitian_defect > 0.1);
}

TEST_CASE("norm form check accepts optimal bounds and rejects inflated ones") {
  Rng rng(29);
  const ModuleDescriptor d{{3, Structure::Full}, 2};
  const auto f = random_family(d, 16, rng);
  const auto c = polynomial_controller(f, 1.0, 0.5);
  const auto r = is_controlled_frame(f, c);
  REQUIRE(r.is_frame);
  CHECK(norm_form_check(f, c, r.bounds, 200, 1));
  const std::vector<ModuleElement> witness = {eigen_witness(r.op, true)};
  CHECK(norm_form_check(f, c, r.bounds, witness));
  CHECK_FALSE(norm_form_check(f, c, {r.bounds.lower * 1.01, r.bounds.upper}, witness));
  const std::vector<ModuleElement> top = {eigen_witness(r.op, false)};
  CHECK_FALSE(norm_form_check(f, c, {r.bounds.lower, r.bounds.upper * 0.99}, top));
}

TEST_CASE("bound conversions follow the closed forms") {
  const ModuleDescriptor d{{2, Structure::Diagonal}, 1};
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 4.0;
  m(1, 1) = 0.25;
  const auto c = certify_gl_plus(ModuleOperator(d, m));
  const ScalarBounds b{1.0, 3.0};
  const auto cp = convert_controlled_to_plain(b, c);
  CHECK(cp.lower == doctest::Approx(1.0 / 4.0));
  CHECK(cp.upper == doctest::Approx(3.0 * 4.0));
  const auto pc = convert_plain_to_controlled(b, c);
  CHECK(pc.lower == doctest::Approx(1.0 / 4.0));
  CHECK(pc.upper == doctest::Approx(3.0 * 4.0));
  const auto as = convert_plain_to_controlled(b, c, ExponentVariant::AsStated);
  CHECK(as.lower == doctest::Approx(4.0));
}

TEST_CASE("as-stated plain-to-controlled lower bound fails when ||C^-1/2|| > 1") {
  // S = I, C = diag(1, 1/4): A_C = 1/4 while the as-stated bound gives 4.
  const ModuleDescriptor d{{2, Structure::Diagonal}, 1};
  std::vector<ModuleElement> vectors;
  for (int i = 0; i < 2; ++i) {
    Matrix e = Matrix::Zero(2, 2);
    e(i, i) = 1.0;
    vectors.emplace_back(d, e);
  }
  const FrameFamily f(d, counting(2), vectors);
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = 0.25;
  const auto c = certify_gl_plus(ModuleOperator(d, m));
  const auto plain = is_controlled_frame(f, identity_controller(d)).bounds;
  const auto controlled = is_controlled_frame(f, c);
  CHECK(sandwich_holds(controlled.op, convert_plain_to_controlled(plain, c)));
  CHECK_FALSE(sandwich_holds(controlled.op, convert_plain_to_controlled(plain, c, ExponentVariant::AsStated)));
}

TEST_CASE("example 1 Neumann contraction and reconstruction") {
  const auto f = example1_family(16);
  const auto c = scalar_controller(f.module(), 1.0);
  const auto r = is_controlled_frame(f, c);
  CHECK(contraction_norm(r.op, r.bounds) == doctest::Approx(0.75).epsilon(1e-12));
  const auto x = ModuleElement::from_components(
      f.module(), {AlgebraElement::diagonal(f.module().algebra, {Complex(0.3, -1.2), 2.0})});
  const auto rec = reconstruct(f, c, x, 1e-12);
  CHECK(module_norm(subtract(rec.estimate, x)) <= 1e-10 * module_norm(x));
  CHECK(rec.neumann.iterations <= 120);
  const auto& res = rec.neumann.residuals;
  for (std::size_t m = 1; m < res.size(); ++m) CHECK(res[m] <= (0.75 + 1e-10) * res[m - 1]);
}

TEST_CASE("Neumann solve on a random full instance") {
  Rng rng(31);
  const ModuleDescriptor d{{2, Structure::Full}, 3};
  const auto f = random_family(d, 20, rng);
  const auto c = polynomial_controller(f, 1.0, 0.3);
  const auto r = is_controlled_frame(f, c);
  REQUIRE(r.is_frame);
  const auto y = gen::module_element(d, rng);
  const auto sol = neumann_inverse_apply(r.op, r.bounds, y, 1e-11);
  CHECK(module_norm(subtract(apply(r.op, sol.solution), y)) <= 1e-11 * module_norm(y) * 1.0001);
  CHECK_THROWS_AS(neumann_inverse_apply(r.op, r.bounds, y, 1e-11, 2), Error);
}

TEST_CASE("transform by K = 2I scales the controlled operator by four") {
  const auto f = example1_family(8);
  const auto c = scalar_controller(f.module(), 1.5);
  const auto k = ModuleOperator::scalar(f.module(), 2.0);
  const auto t = transform_frame(k, f, c);
  const auto sc = controlled_frame_operator(f, c);
  const auto kc = controlled_frame_operator(t.family, c);
  CHECK(op_max_abs_diff(kc, op_scale(sc, 4.0)) < 1e-13);
  CHECK(t.predicted.lower == doctest::Approx(4.0 * 1.5 / 12.0));
  CHECK(t.predicted.upper == doctest::Approx(4.0 * 1.5 / 3.0));
}

TEST_CASE("transform identity K S_C K* on random instances") {
  Rng rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    const ModuleDescriptor d{{1 + trial % 3, Structure::Full}, 1 + trial % 2};
    const auto f = random_family(d, 12, rng);
    const auto c = polynomial_controller(f, 0.8, 0.6);
    const Matrix kf = Complex(1.0, 0.5) * Matrix::Identity(d.flat_size(), d.flat_size()) + 0.3 * c.op().flattened();
    const ModuleOperator k(d, kf);
    const auto t = transform_frame(k, f, c);
    const auto lhs = controlled_frame_operator(t.family, c);
    const auto rhs = compose(k, compose(controlled_frame_operator(f, c), op_adjoint(k)));
    CHECK(op_max_abs_diff(lhs, rhs) <= 1e-10 * std::max(1.0, op_norm(rhs)));
    const auto r = is_controlled_frame(t.family, c);
    REQUIRE(r.is_frame);
    CHECK(sandwich_holds(r.op, t.predicted));
  }
}

TEST_CASE("transform preconditions") {
  const auto f = example1_family(4);
  const auto c = scalar_controller(f.module(), 1.0);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  try {
    transform_frame(ModuleOperator(f.module(), m), f, c);
    FAIL("expected NotSurjective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSurjective);
  }
}

TEST_CASE("example 2 tight star bound") {
  const int n = 100;
  for (double alpha : {1.0, 4.0}) {
    const Instance inst = build_instance(builtin_scenario("example2", alpha, n));
    const auto sb = derive_tight_star_bound(inst.frame, inst.controller);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(sb.lower(i, i) - std::sqrt(alpha) / (i + 1.0)));
      worst = std::max(worst, std::abs(sb.upper(i, i) - std::sqrt(alpha) / (i + 1.0)));
    }
    CHECK(worst <= 1e-12);
    const auto v = verify_star_bounds(inst.frame, inst.controller, sb, kDefaultTol, 200, 5);
    CHECK(v.holds);
    CHECK(v.samples == 200);
    CHECK(v.max_lower_gap <= 1e-10 * v.scale);
    CHECK(v.max_upper_gap <= 1e-10 * v.scale);

    const StarBounds inflated{scale(sb.lower, 1.01), sb.upper};
    CHECK_FALSE(verify_star_bounds(inst.frame, inst.controller, inflated, kDefaultTol, 50, 5).holds);
  }
}

TEST_CASE("tight star bound preconditions") {
  Rng rng(41);
  const ModuleDescriptor full{{2, Structure::Full}, 1};
  const auto f = random_family(full, 8, rng);
  try {
    derive_tight_star_bound(f, identity_controller(full));
    FAIL("expected NotCommutative");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCommutative);
  }
  const ModuleDescriptor rank2{{2, Structure::Diagonal}, 2};
  const auto g = random_family(rank2, 8, rng);
  try {
    derive_tight_star_bound(g, identity_controller(rank2));
    FAIL("expected NotMultiplicationOperator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMultiplicationOperator);
  }
}

TEST_CASE("star bound conversions and transforms stay valid") {
  const Instance inst = build_instance(builtin_scenario("example2", 2.0, 12));
  const auto sb = derive_tight_star_bound(inst.frame, inst.controller);
  const auto plain = convert_star_bounds(sb, inst.controller, ConversionDirection::ControlledToPlain);
  const auto id = identity_controller(inst.frame.module());
  CHECK(verify_star_bounds(inst.frame, id, plain, kDefaultTol, 100, 3).holds);
  const auto k = ModuleOperator::scalar(inst.frame.module(), Complex(0.0, 3.0));
  const auto t = transform_star_frame(k, inst.frame, inst.controller, sb);
  CHECK(verify_star_bounds(t.family, inst.controller, t.bounds, kDefaultTol, 100, 4).holds);
}

TEST_CASE("l2 inner product of coefficient vectors") {
  const AlgebraDescriptor a{1, Structure::Full};
  const auto s = counting(std::vector<double>{1.0, 2.0});
  const CoefficientVector c(s, {AlgebraElement::scalar(a, Complex(1, 1)), AlgebraElement::scalar(a, 2.0)});
  const CoefficientVector e(s, {AlgebraElement::scalar(a, 1.0), AlgebraElement::scalar(a, Complex(0, 1))});
  // (1+i) + 2 * 2 * (-i)
  CHECK(std::abs(l2_inner_product(c, e)(0, 0) - Complex(1, -3)) < 1e-15);
}

}
