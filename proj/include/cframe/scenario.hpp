#pragma once

// Declarative scenarios: what module, measure, frame, controller and
// optional transform an analysis runs on.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cframe/frames.hpp"

namespace cframe {

enum class FrameSource { Builtin, Explicit, Random };
enum class ControllerKind { Identity, Scalar, Explicit, FramePolynomial };
enum class TransformKind { Scalar, Explicit, ControllerPolynomial };

const char* to_string(FrameSource s) noexcept;
const char* to_string(ControllerKind k) noexcept;
const char* to_string(TransformKind k) noexcept;

struct MeasureSpec {
  MeasureKind kind = MeasureKind::IntervalGaussLegendre;
  double a = 0.0;
  double b = 1.0;
  int nodes = 16;
  std::vector<double> weights;  // counting measure only; empty means unit weights
};

struct FrameSpec {
  FrameSource source = FrameSource::Builtin;
  std::string builtin;  // "example1" | "example2"
  double alpha = 1.0;
  int truncation = 100;          // example2
  std::vector<Matrix> vectors;   // explicit: one n x (n k) block row per node
  double random_scale = 1.0;
};

struct ControllerSpec {
  ControllerKind kind = ControllerKind::Identity;
  double alpha = 1.0;
  Matrix matrix;                     // explicit flattened operator
  std::vector<double> coefficients;  // C = sum_j c_j S^j
};

struct TransformSpec {
  TransformKind kind = TransformKind::Scalar;
  Complex scalar = 1.0;
  Matrix matrix;
  std::vector<Complex> coefficients;  // K = sum_j k_j C^j
};

struct Tolerances {
  double positivity = kDefaultTol;
  double tightness = kTightnessTol;
  double reconstruction = 1e-12;
};

struct Scenario {
  std::string name = "scenario";
  AlgebraDescriptor algebra{1, Structure::Full};
  int rank = 1;
  MeasureSpec measure;
  FrameSpec frame;
  ControllerSpec controller;
  std::optional<TransformSpec> transform;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  int samples = 200;      // sampled checks (norm form, *-bounds)
  int max_iter = 1000000;  // Neumann iterations
};

/// Default seed, overridable with the CFRAME_SEED environment variable.
std::uint64_t default_seed();

/// example1: alpha > 0. example2: alpha > 0, truncation >= 1. Throws
/// ValidationError.
Scenario builtin_scenario(const std::string& name, double alpha = 1.0, int truncation = 100);

/// Throws IoError, ParseError (with file, line and key) or ValidationError.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");

struct Instance {
  FrameFamily frame;
  GlPlusCertificate controller;
  std::optional<ModuleOperator> transform;
};

/// Resolves generators, tables and the controller. Errors carry the
/// scenario name; InvalidArgument is reported as ValidationError, other
/// codes (NotInGlPlus for a bad controller) are kept.
Instance build_instance(const Scenario& s);

ModuleDescriptor module_descriptor(const Scenario& s);
MeasureSpace build_measure(const Scenario& s);

}  // namespace cframe
