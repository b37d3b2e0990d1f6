#pragma once

// Orchestration behind the strsub command-line tool: solve, verify, sweep and
// gen. Reports are deterministic except for the "execution" section (thread
// count and wall-clock timings).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "strsub/adaptive_measurement.hpp"
#include "strsub/cli/instance_io.hpp"
#include "strsub/optimize.hpp"
#include "strsub/properties.hpp"
#include "strsub/task_assignment.hpp"

namespace strsub::cli {

enum class OutputFormat { kJson, kCsv };

/// Raised when a solver result contradicts a structural guarantee, such as
/// the exhaustive optimum scoring below the greedy string.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<Model> model;
  std::optional<std::string> instance_path;

  // Generator parameters, used when no instance file is given.
  std::uint64_t seed = 1;
  std::size_t n = 1;
  std::size_t m = 3;
  double p_low = 0.5;
  double p_high = 0.95;
  std::vector<double> sigma_sq;
  measurement::SigmaOrder sigma_order = measurement::SigmaOrder::kNonDecreasing;
  std::size_t grid_points = measurement::kDefaultGridPoints;
  // Horizon of the generated instance before truncation to K; defaults to K.
  // Sweeps over K set it so every K sees the same instance.
  std::optional<std::size_t> generate_K;

  // Defaults to the instance horizon (3 for generated instances).
  std::optional<std::size_t> K;
  double tol = kDefaultTol;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::string> out;
  bool go_index_oj = false;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
};

struct TaskConditions {
  task::DiminishingCondition diminishing;
  task::HalfCondition half;
  std::optional<task::PriorCondition> prior;  // n == 1 only
  std::optional<task::GoCondition> go;        // as printed (o_i)
  std::optional<task::GoCondition> go_oj;     // with --go-index-oj
};

struct MeasurementConditions {
  measurement::SigmaCondition sigma;
  measurement::PriorCondition prior;
  std::optional<measurement::FirstStageCheck> first_stage;
  std::vector<measurement::GoInequalityTerms> go_terms;
  // Verdict of each go_terms entry matches the definitional check.
  std::optional<bool> go_terms_agree;
};

struct RunReport {
  std::string command;
  RunConfig config;
  Model model = Model::kTaskAssignment;
  std::size_t K = 0;
  std::size_t alphabet_size = 0;

  GreedyTrace greedy;
  OptimalResult optimal;
  std::vector<PropertyReport> properties;
  CurvatureEstimate eta;
  CurvatureEstimate sigma_hat;
  BoundReport bound;
  std::variant<std::monostate, TaskConditions, MeasurementConditions>
      model_conditions;

  struct EvaluationCounts {
    std::uint64_t greedy = 0;
    std::uint64_t optimal = 0;
    std::uint64_t bound = 0;
    std::uint64_t checks = 0;
    std::uint64_t total = 0;
  } evaluation_counts;

  struct Timings {
    double greedy_ms = 0.0;
    double optimal_ms = 0.0;
    double bound_ms = 0.0;
    double checks_ms = 0.0;
    double total_ms = 0.0;
  } timings;

  const PropertyReport* find(Property p) const;
};

/// Loads config.instance_path or generates an instance from the generator
/// fields, then truncates it to K stages.
Instance make_instance(const RunConfig& config);

RunReport run_solve(const RunConfig& config);
RunReport run_verify(const RunConfig& config);

nlohmann::json to_json(const RunReport& report);
// to_json without the "execution" section.
nlohmann::json report_body(const RunReport& report);

/// Fixed CSV columns shared by solve/verify (--format csv) and sweep.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const RunReport& report, const std::string& param = "",
                    const std::string& value = "",
                    const std::string& seed = "");

std::string format_report(const RunReport& report, OutputFormat format);

/// One row per (value, seed). Throws std::invalid_argument for a parameter
/// that does not apply to the model.
std::string run_sweep(const RunConfig& config, const SweepSpec& sweep);

/// Entry point for the CLI. Returns the process exit code:
/// 0 success, 1 usage/parse error, 2 budget exceeded, 3 invariant violation.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace strsub::cli
