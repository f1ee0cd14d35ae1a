#pragma once

// Analysis reports for scenarios and the property suite, and their
// human / json / csv renderings.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cframe/scenario.hpp"

namespace cframe {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AnalysisReport {
  std::string kind;  // analysis | verification | reconstruction | frame | suite
  Json data = Json::object();
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> quantities;  // csv rows, in order
  std::vector<std::string> notes;
  double wall_ms = 0.0;  // rendered in human output only

  bool passed() const;
};

enum class Format { Human, Json, Csv };

/// Throws ParseError on anything but human, json or csv.
Format parse_format(const std::string& text);

/// Everything: operator, bounds, conversions, *-bounds, transform and a
/// reconstruction with its Neumann trace.
AnalysisReport run_analysis(const Scenario& s);

/// The same checks as run_analysis without the operator and trace tables.
AnalysisReport run_verification(const Scenario& s);

/// Reconstructs a seeded random element; tol defaults to the scenario's.
AnalysisReport run_reconstruction(const Scenario& s, std::optional<double> tol = std::nullopt);

/// The frame vectors at every node.
AnalysisReport dump_frame(const Scenario& s);

/// Scenario description as it appears in every report.
Json scenario_json(const Scenario& s);

std::string emit(const AnalysisReport& report, Format format);

}  // namespace cframe
