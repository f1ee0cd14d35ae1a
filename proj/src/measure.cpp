#include "cframe/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cframe/error.hpp"

namespace cframe {

namespace {

void require_interval(double a, double b, int m, int min_nodes) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    fail(ErrorCode::InvalidArgument, "interval requires finite a < b");
  if (m < min_nodes)
    fail(ErrorCode::InvalidArgument, "need at least " + std::to_string(min_nodes) + " nodes");
}

}  // namespace

const char* to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::IntervalRiemann: return "riemann";
    case MeasureKind::IntervalTrapezoid: return "trapezoid";
    case MeasureKind::IntervalGaussLegendre: return "gauss_legendre";
    case MeasureKind::DiscreteCounting: return "counting";
  }
  return "unknown";
}

MeasureSpace::MeasureSpace(MeasureKind kind, std::vector<double> nodes, std::vector<double> weights)
    : kind_(kind), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty()) fail(ErrorCode::InvalidArgument, "measure space needs at least one node");
  if (nodes_.size() != weights_.size())
    fail(ErrorCode::InvalidArgument, "nodes and weights differ in length");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(ErrorCode::InvalidArgument, "weights must be finite and > 0");
}

double MeasureSpace::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

MeasureSpace gauss_legendre(double a, double b, int m) {
  require_interval(a, b, m, 1);
  std::vector<double> t(m), w(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_m(z) and its derivative.
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = m * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    t[i] = -z;
    t[m - 1 - i] = z;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (m % 2 == 1) t[m / 2] = 0.0;
  const double mid = 0.5 * (a + b), half_len = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    t[i] = mid + half_len * t[i];
    w[i] *= half_len;
  }
  return {MeasureKind::IntervalGaussLegendre, std::move(t), std::move(w)};
}

MeasureSpace trapezoid(double a, double b, int m) {
  require_interval(a, b, m, 2);
  const double h = (b - a) / (m - 1);
  std::vector<double> t(m), w(m, h);
  for (int i = 0; i < m; ++i) t[i] = a + h * i;
  t[m - 1] = b;
  w.front() = w.back() = 0.5 * h;
  return {MeasureKind::IntervalTrapezoid, std::move(t), std::move(w)};
}

MeasureSpace riemann(double a, double b, int m) {
  require_interval(a, b, m, 1);
  const double h = (b - a) / m;
  std::vector<double> t(m), w(m, h);
  for (int i = 0; i < m; ++i) t[i] = a + h * (i + 0.5);
  return {MeasureKind::IntervalRiemann, std::move(t), std::move(w)};
}

MeasureSpace counting(int size) {
  if (size < 1) fail(ErrorCode::InvalidArgument, "counting measure needs size >= 1");
  return counting(std::vector<double>(size, 1.0));
}

MeasureSpace counting(std::vector<double> weights) {
  std::vector<double> nodes(weights.size());
  std::iota(nodes.begin(), nodes.end(), 0.0);
  return {MeasureKind::DiscreteCounting, std::move(nodes), std::move(weights)};
}

AlgebraElement integrate_algebra_valued(const Integrand<AlgebraElement>& f, const MeasureSpace& space) {
  const auto& nodes = space.nodes();
  const auto& weights = space.weights();
  AlgebraElement first = f(0, nodes[0]);
  Matrix acc = weights[0] * first.entries();
  for (std::size_t i = 1; i < space.size(); ++i) {
    const AlgebraElement value = f(i, nodes[i]);
    require_same(value.descriptor(), first.descriptor(), "integrand");
    acc += weights[i] * value.entries();
  }
  return AlgebraElement::projected(first.descriptor(), std::move(acc));
}

ModuleElement integrate_module_valued(const Integrand<ModuleElement>& f, const MeasureSpace& space) {
  const auto& nodes = space.nodes();
  const auto& weights = space.weights();
  ModuleElement first = f(0, nodes[0]);
  Matrix acc = weights[0] * first.block_row();
  for (std::size_t i = 1; i < space.size(); ++i) {
    const ModuleElement value = f(i, nodes[i]);
    require_same(value.descriptor(), first.descriptor(), "integrand");
    acc += weights[i] * value.block_row();
  }
  return ModuleElement::projected(first.descriptor(), std::move(acc));
}

}  // namespace cframe
