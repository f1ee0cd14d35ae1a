#pragma once

// Finite discretizations of (Omega, mu) and the weighted-sum realisation of
// the Bochner integral.

#include <cstddef>
#include <functional>
#include <vector>

#include "cframe/hilbert_module.hpp"

namespace cframe {

enum class MeasureKind { IntervalRiemann, IntervalTrapezoid, IntervalGaussLegendre, DiscreteCounting };

const char* to_string(MeasureKind kind) noexcept;

class MeasureSpace {
 public:
  /// Validates lengths (equal, >= 1) and strictly positive weights.
  MeasureSpace(MeasureKind kind, std::vector<double> nodes, std::vector<double> weights);

  MeasureKind kind() const noexcept { return kind_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double total_mass() const;

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  MeasureKind kind_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// m-point Gauss-Legendre rule on [a, b], nodes ascending. Exact for
/// polynomials of degree <= 2m - 1.
MeasureSpace gauss_legendre(double a, double b, int m);
/// Composite trapezoid rule, m >= 2 equally spaced nodes including both ends.
MeasureSpace trapezoid(double a, double b, int m);
/// Midpoint Riemann sum over m equal cells.
MeasureSpace riemann(double a, double b, int m);
/// Indices 0..size-1 with unit weights.
MeasureSpace counting(int size);
/// Indices 0..size-1 with explicit positive weights.
MeasureSpace counting(std::vector<double> weights);

template <class T>
using Integrand = std::function<T(std::size_t index, double node)>;

// Both integrals accumulate sequentially in ascending node order, so results
// are bit-identical across runs.
AlgebraElement integrate_algebra_valued(const Integrand<AlgebraElement>& f, const MeasureSpace& space);
ModuleElement integrate_module_valued(const Integrand<ModuleElement>& f, const MeasureSpace& space);

}  // namespace cframe
