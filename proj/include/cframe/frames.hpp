#pragma once

// Integral frames, C-controlled integral frames and *-frames over a
// discretized measure space: frame operators, bounds, bound conversions,
// Neumann inversion, reconstruction and the K F transform.

#include <cstdint>
#include <span>
#include <vector>

#include "cframe/measure.hpp"

namespace cframe {

/// Relative threshold for classifying A == B (and A == 1).
inline constexpr double kTightnessTol = 1e-9;

class FrameFamily {
 public:
  /// One vector per node, all sharing `module`.
  FrameFamily(ModuleDescriptor module, MeasureSpace space, std::vector<ModuleElement> vectors);

  /// Samples `generator` at every node of `space`.
  static FrameFamily sample(ModuleDescriptor module, MeasureSpace space,
                            const Integrand<ModuleElement>& generator);

  const ModuleDescriptor& module() const noexcept { return module_; }
  const MeasureSpace& space() const noexcept { return space_; }
  const std::vector<ModuleElement>& vectors() const noexcept { return vectors_; }
  std::size_t size() const noexcept { return vectors_.size(); }

 private:
  ModuleDescriptor module_;
  MeasureSpace space_;
  std::vector<ModuleElement> vectors_;
};

/// An element of l2(Omega, A): one algebra coefficient per node.
class CoefficientVector {
 public:
  CoefficientVector(MeasureSpace space, std::vector<AlgebraElement> coeffs);

  const MeasureSpace& space() const noexcept { return space_; }
  const std::vector<AlgebraElement>& coeffs() const noexcept { return coeffs_; }

 private:
  MeasureSpace space_;
  std::vector<AlgebraElement> coeffs_;
};

/// <c, d> = sum_i mu_i c_i d_i^*
AlgebraElement l2_inner_product(const CoefficientVector& c, const CoefficientVector& d);

struct ScalarBounds {
  double lower = 0.0;
  double upper = 0.0;

  /// 0 < lower <= upper, both finite.
  bool valid() const noexcept;
};

struct StarBounds {
  AlgebraElement lower;
  AlgebraElement upper;
};

enum class Tightness { Tight, Parseval, General };
const char* to_string(Tightness t) noexcept;

struct FrameDiagnostics {
  bool self_adjoint = false;
  bool positive = false;
  bool invertible = false;
  double hermitian_defect = 0.0;  // ||S - S^*||
};

struct FrameReport {
  bool is_frame = false;
  ScalarBounds bounds;  // optimal when is_frame, raw extreme eigenvalues otherwise
  ModuleOperator op;
  Tightness tightness = Tightness::General;
  FrameDiagnostics diagnostics;
  RealVector eigenvalues;  // ascending, of the flattened operator
};

/// c_i = <x, F_i>
CoefficientVector analysis(const FrameFamily& f, const ModuleElement& x);
/// integral of c_i F_i
ModuleElement synthesis(const FrameFamily& f, const CoefficientVector& c);
/// integral of c_i C F_i
ModuleElement controlled_synthesis(const FrameFamily& f, const GlPlusCertificate& c,
                                   const CoefficientVector& coeffs);

/// S x = integral of <x, F_w> F_w, assembled from its action on the module basis.
ModuleOperator frame_operator(const FrameFamily& f);
/// S_C x = integral of <x, F_w> C F_w, assembled the same way.
ModuleOperator controlled_frame_operator(const FrameFamily& f, const GlPlusCertificate& c);

GlPlusCertificate identity_controller(const ModuleDescriptor& d);

/// Extreme eigenvalues of the flattened operator. Throws NotSelfAdjoint, or
/// NotPositive when the smallest eigenvalue is not strictly positive.
ScalarBounds optimal_scalar_bounds(const ModuleOperator& s, double tol = kDefaultTol);

/// lower.I <= S <= upper.I in the operator Loewner order.
bool sandwich_holds(const ModuleOperator& s, const ScalarBounds& bounds, double tol = kDefaultTol);

/// Computes S_C and its diagnostics. Failures are reported, not thrown.
FrameReport is_controlled_frame(const FrameFamily& f, const GlPlusCertificate& c, double tol = kDefaultTol,
                                double tightness_tol = kTightnessTol);

/// Checks A ||x||^2 <= ||<S_C x, x>|| <= B ||x||^2 on each sample (first
/// power in the middle). The slack is tol * max(1, B ||x||^2).
bool norm_form_check(const FrameFamily& f, const GlPlusCertificate& c, const ScalarBounds& bounds,
                     std::span<const ModuleElement> samples, double tol = kDefaultTol);
bool norm_form_check(const FrameFamily& f, const GlPlusCertificate& c, const ScalarBounds& bounds,
                     int samples, std::uint64_t seed, double tol = kDefaultTol);

/// Module element realising the eigenvector of the smallest (or largest)
/// eigenvalue of the flattened operator.
ModuleElement eigen_witness(const ModuleOperator& s, bool smallest);

/// (A ||C^{1/2}||^-2, B ||C^{-1/2}||^2)
ScalarBounds convert_controlled_to_plain(const ScalarBounds& bounds, const GlPlusCertificate& c);

/// Which exponent on ||C^{-1/2}|| the lower plain->controlled bound uses.
/// Derived: A ||C^{-1/2}||^-2, the bound the derivation actually yields.
/// AsStated: A ||C^{-1/2}||^2, kept only to demonstrate that it is unsound.
enum class ExponentVariant { Derived, AsStated };

/// (A ||C^{-1/2}||^-2, B ||C^{1/2}||^2) for ExponentVariant::Derived.
ScalarBounds convert_plain_to_controlled(const ScalarBounds& bounds, const GlPlusCertificate& c,
                                         ExponentVariant variant = ExponentVariant::Derived);

struct NeumannResult {
  ModuleElement solution;
  std::vector<double> residuals;  // ||y - S_C x_m|| for m = 0, 1, ...
  int iterations = 0;
};

/// Solves S_C x = y with x_{m+1} = x_m + B^-1 (y - S_C x_m), x_0 = 0, until
/// ||y - S_C x_m|| <= tol ||y||. Throws MaxIterExceeded.
NeumannResult neumann_inverse_apply(const ModuleOperator& s_c, const ScalarBounds& bounds,
                                    const ModuleElement& y, double tol, int max_iter = 1000000);

/// Measured ||I - B^-1 S||.
double contraction_norm(const ModuleOperator& s, const ScalarBounds& bounds);

struct ReconstructResult {
  ModuleElement estimate;
  NeumannResult neumann;
  ScalarBounds bounds;
};

/// x = S_C^-1 integral of <x, F_w> C F_w. Stops once the residual is below
/// tol (A/B) ||y|| or once ((B-A)/B)^m <= tol; either guarantees
/// ||estimate - x|| <= tol ||x|| up to rounding. Throws NotAFrame,
/// MaxIterExceeded.
ReconstructResult reconstruct(const FrameFamily& f, const GlPlusCertificate& c, const ModuleElement& x,
                              double tol, int max_iter = 1000000);

struct TransformResult {
  FrameFamily family;
  ScalarBounds predicted;
};

/// Checks surjectivity of K and ||KC - CK|| <= tol ||K|| ||C||. Throws
/// NotSurjective, NonCommuting.
void require_transform_preconditions(const ModuleOperator& k, const GlPlusCertificate& c, double tol);

/// K F with predicted bounds (A ||(K K^*)^-1||^-1, B ||K||^2); its frame
/// operator under C is K S_C K^*.
TransformResult transform_frame(const ModuleOperator& k, const FrameFamily& f, const GlPlusCertificate& c,
                                double tol = kDefaultTol);

struct StarVerification {
  bool holds = false;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_lower_gap = 0.0;  // max ||<S_C x,x> - A<x,x>A^*||
  double max_upper_gap = 0.0;  // max ||B<x,x>B^* - <S_C x,x>||
  double scale = 0.0;          // max ||<S_C x,x>||
};

StarVerification verify_star_bounds(const FrameFamily& f, const GlPlusCertificate& c, const StarBounds& sb,
                                    std::span<const ModuleElement> samples, double tol = kDefaultTol);
StarVerification verify_star_bounds(const FrameFamily& f, const GlPlusCertificate& c, const StarBounds& sb,
                                    double tol, int samples, std::uint64_t seed);

/// For rank-1 modules over a diagonal algebra S_C is multiplication by a
/// positive element s; returns A = B = s^{1/2}. Throws NotCommutative,
/// NotMultiplicationOperator, NotPositive.
StarBounds derive_tight_star_bound(const FrameFamily& f, const GlPlusCertificate& c, double tol = kDefaultTol);

enum class ConversionDirection { ControlledToPlain, PlainToControlled };

/// ControlledToPlain: (||C^{1/2}||^-1 A, ||C^{-1/2}|| B)
/// PlainToControlled: (||C^{-1/2}||^-1 A, ||C^{1/2}|| B)
StarBounds convert_star_bounds(const StarBounds& sb, const GlPlusCertificate& c, ConversionDirection direction);

struct StarTransformResult {
  FrameFamily family;
  StarBounds bounds;
};

/// K F with bounds (||(K K^*)^-1||^{-1/2} A, ||K|| B).
StarTransformResult transform_star_frame(const ModuleOperator& k, const FrameFamily& f,
                                         const GlPlusCertificate& c, const StarBounds& sb,
                                         double tol = kDefaultTol);

}  // namespace cframe
