#pragma once

// Randomized property suite: every algebraic identity, operator inequality and bound
// conversion checked over seeded random instances.

#include <cstdint>
#include <string>
#include <vector>

#include "cframe/report.hpp"

namespace cframe {

struct SuiteOptions {
  std::uint64_t seed = 0;
  int cases = 200;
  int max_dim = 4;
  int max_rank = 3;
  int max_nodes = 64;
  int samples = 200;  // sampled module elements per sampled check
  ExponentVariant variant = ExponentVariant::Derived;
};

/// Names of the properties, in report order.
const std::vector<std::string>& property_names();

/// One report entry per property with pass / fail tallies; failures carry
/// the case index and seed that reproduce them. Throws InvalidArgument when
/// cases < 1 or a cap is < 1.
AnalysisReport run_property_suite(const SuiteOptions& options);

}  // namespace cframe
