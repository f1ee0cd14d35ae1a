#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cframe/error.hpp"
#include "cframe/measure.hpp"

using namespace cframe;

namespace {

double integrate(const MeasureSpace& s, double (*f)(double)) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += s.weights()[i] * f(s.nodes()[i]);
  return acc;
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("two-point Gauss-Legendre integrates w^2 exactly") {
  const auto s = gauss_legendre(0.0, 1.0, 2);
  CHECK(s.size() == 2);
  CHECK(integrate(s, [](double w) { return w * w; }) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // nodes 1/2 -+ 1/(2 sqrt 3)
  CHECK(s.nodes()[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(s.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Gauss-Legendre is exact up to degree 2m - 1") {
  for (int m = 1; m <= 40; ++m) {
    const auto s = gauss_legendre(-1.0, 3.0, m);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.nodes()[i] > s.nodes()[i - 1]);
    CHECK(s.total_mass() == doctest::Approx(4.0).epsilon(1e-13));
    const int deg = 2 * m - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s.weights()[i] * std::pow(s.nodes()[i], deg);
    const double exact = (std::pow(3.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    CHECK(acc == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Legendre converges on a smooth integrand") {
  const auto s = gauss_legendre(0.0, std::numbers::pi, 20);
  CHECK(integrate(s, [](double w) { return std::sin(w); }) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("trapezoid and midpoint rules are exact on linear integrands") {
  const auto t = trapezoid(0.0, 2.0, 5);
  CHECK(t.nodes().front() == 0.0);
  CHECK(t.nodes().back() == 2.0);
  CHECK(t.weights().front() == doctest::Approx(0.25));
  CHECK(integrate(t, [](double w) { return 3.0 * w + 1.0; }) == doctest::Approx(8.0).epsilon(1e-15));
  const auto r = riemann(0.0, 2.0, 4);
  CHECK(r.nodes().front() == doctest::Approx(0.25));
  CHECK(integrate(r, [](double w) { return 3.0 * w + 1.0; }) == doctest::Approx(8.0).epsilon(1e-15));
  // midpoint error for w^2 on [0, 2] with h = 0.5 is -(b - a) h^2 / 12
  CHECK(integrate(r, [](double w) { return w * w; }) == doctest::Approx(8.0 / 3.0 - 2.0 * 0.25 / 12.0).epsilon(1e-14));
}

TEST_CASE("counting measures") {
  const auto c = counting(5);
  CHECK(c.total_mass() == 5.0);
  CHECK(c.nodes()[4] == 4.0);
  const auto w = counting(std::vector<double>{1.0, 0.5});
  CHECK(w.total_mass() == 1.5);
  CHECK(w.kind() == MeasureKind::DiscreteCounting);
}

TEST_CASE("invalid measures are rejected") {
  CHECK_THROWS_AS(MeasureSpace(MeasureKind::DiscreteCounting, {0.0, 1.0}, {1.0}), Error);
  CHECK_THROWS_AS(MeasureSpace(MeasureKind::DiscreteCounting, {}, {}), Error);
  CHECK_THROWS_AS(counting(std::vector<double>{1.0, 0.0}), Error);
  CHECK_THROWS_AS(counting(std::vector<double>{1.0, -2.0}), Error);
  CHECK_THROWS_AS(gauss_legendre(0.0, 1.0, 0), Error);
  CHECK_THROWS_AS(trapezoid(0.0, 1.0, 1), Error);
}

TEST_CASE("algebra- and module-valued integrals are weighted sums") {
  const AlgebraDescriptor a{2, Structure::Diagonal};
  const auto s = gauss_legendre(0.0, 1.0, 3);
  const auto integral = integrate_algebra_valued(
      [&](std::size_t, double w) { return AlgebraElement::diagonal(a, {w * w, 1.0}); }, s);
  CHECK(integral(0, 0).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(integral(1, 1).real() == doctest::Approx(1.0).epsilon(1e-15));

  const ModuleDescriptor d{a, 2};
  const auto mod = integrate_module_valued(
      [&](std::size_t i, double w) {
        return ModuleElement::from_components(
            d, {AlgebraElement::scalar(a, w), AlgebraElement::scalar(a, static_cast<double>(i))});
      },
      s);
  CHECK(mod.component(0)(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
  const double idx = s.weights()[1] + 2.0 * s.weights()[2];
  CHECK(mod.component(1)(0, 0).real() == doctest::Approx(idx).epsilon(1e-15));
}

TEST_CASE("integrals are deterministic") {
  const auto s = gauss_legendre(0.0, 1.0, 64);
  const AlgebraDescriptor a{3, Structure::Full};
  auto f = [&](std::size_t i, double w) {
    Matrix m = Matrix::Constant(3, 3, Complex(std::sin(w * (i + 1)), std::cos(w)));
    return AlgebraElement(a, m);
  };
  CHECK(max_abs_diff(integrate_algebra_valued(f, s), integrate_algebra_valued(f, s)) == 0.0);
}

}
