#pragma once

// Greedy and exhaustive solvers for
//
//   maximize f(M)  subject to  |M| <= K,
//
// and the report comparing the greedy value with the guaranteed fractions of
// the optimum.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "strsub/core.hpp"
#include "strsub/objective.hpp"

namespace strsub {

struct CurvatureEstimate;

/// Nested greedy prefixes G_1 ⪯ ... ⪯ G_K and their values.
struct GreedyTrace {
  std::vector<ActionString> prefixes;
  std::vector<double> values;
  // Number of actions attaining the stage maximum exactly.
  std::vector<std::size_t> per_stage_argmax_ties;

  std::size_t horizon() const { return prefixes.size(); }
  const ActionString& result() const { return prefixes.back(); }
  double value() const { return values.back(); }
  // G_i for 1 <= i <= K.
  const ActionString& prefix(std::size_t i) const { return prefixes[i - 1]; }
  double value_at(std::size_t i) const { return values[i - 1]; }
};

struct OptimalResult {
  ActionString argmax;
  double value = 0.0;
  std::uint64_t num_evaluated = 0;
};

struct BoundReport {
  double greedy_value = 0.0;
  double optimal_value = 0.0;
  std::optional<double> ratio;
  double factor_thm3 = 1.0;
  std::optional<double> eta;
  std::optional<double> factor_thm4;
  std::optional<double> sigma_hat;
  // Computed from the length-restricted curvature: indicative, not certified.
  std::optional<double> factor_thm2;
  bool satisfied_thm3 = false;
  bool satisfied_thm4 = false;
};

/// Picks at each stage the action maximizing f(G_{i-1} ⊕ (g)); ties go to the
/// smallest action index. Uses K·m evaluations.
GreedyTrace greedy(const ObjectiveOracle& oracle, std::size_t K);

/// Evaluates every string of length 1..K and returns the first maximizer in
/// length-then-lexicographic order. If every string scores below zero the
/// empty string (value 0) is returned.
///
/// Throws InstanceTooLarge if sum_{k=1..K} m^k exceeds options.budget.
OptimalResult exhaustive_optimal(const ObjectiveOracle& oracle, std::size_t K,
                                 const SolverOptions& options = {});

BoundReport bound_report(const ObjectiveOracle& oracle, std::size_t K,
                         const GreedyTrace& greedy,
                         const OptimalResult& optimal, double tol,
                         const SolverOptions& options = {});

// Fills the report from already computed pieces; evaluates nothing.
BoundReport assemble_bound_report(std::size_t K, const GreedyTrace& greedy,
                                  const OptimalResult& optimal,
                                  const CurvatureEstimate& eta,
                                  const CurvatureEstimate& sigma_hat,
                                  double tol);

// Runs greedy and exhaustive_optimal first.
BoundReport bound_report(const ObjectiveOracle& oracle, std::size_t K,
                         double tol = kDefaultTol,
                         const SolverOptions& options = {});

// Slack allowed on the bound comparisons: tol scaled by max(1, |optimal|).
double bound_slack(double optimal_value, double tol);

}  // namespace strsub
