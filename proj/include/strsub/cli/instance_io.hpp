#pragma once

// Instance files are JSON documents with a schema_version field:
//
//   {"schema_version": 1, "model": "task_assignment", "n": 1, "m": 2, "K": 2,
//    "L": [[...m]...n], "U": [[...m]...n], "p": [[[...m]...K]...n]}
//
//   {"schema_version": 1, "model": "adaptive_measurement",
//    "sigma_sq": [...K], "e_grid": [...] | {"count": 11, "min": 0.5, "max": 1}}
//
//   {"schema_version": 1, "model": "table", "m": 2, "K": 2,
//    "entries": [{"string": [0, 1], "value": 0.5}, ...]}

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "strsub/adaptive_measurement.hpp"
#include "strsub/objective.hpp"
#include "strsub/task_assignment.hpp"

namespace strsub::cli {

inline constexpr int kSchemaVersion = 1;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model { kTaskAssignment, kAdaptiveMeasurement, kTable };

std::string_view model_name(Model model);
std::optional<Model> parse_model(std::string_view name);

using Instance = std::variant<task::TaskAssignmentInstance,
                              measurement::MeasurementInstance, TableOracle>;

Model model_of(const Instance& instance);
std::size_t horizon_of(const Instance& instance);

// `source` names the document in diagnostics.
Instance parse_instance(std::string_view text, std::string_view source);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& instance);

}  // namespace strsub::cli
