#include "strsub/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strsub/detail/parallel.hpp"
#include "strsub/properties.hpp"

namespace strsub {

namespace {

void require_horizon(const ObjectiveOracle& oracle, std::size_t K) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (K > oracle.horizon())
    throw std::invalid_argument("K=" + std::to_string(K) +
                                " exceeds the oracle horizon " +
                                std::to_string(oracle.horizon()));
}

struct Best {
  bool found = false;
  double value = 0.0;
  std::uint64_t rank = 0;
};

}  // namespace

GreedyTrace greedy(const ObjectiveOracle& oracle, std::size_t K) {
  require_horizon(oracle, K);
  const std::size_t m = oracle.alphabet_size();

  GreedyTrace trace;
  trace.prefixes.reserve(K);
  trace.values.reserve(K);
  trace.per_stage_argmax_ties.reserve(K);

  ActionString current;
  for (std::size_t stage = 0; stage < K; ++stage) {
    ActionString best_string;
    double best_value = 0.0;
    std::size_t ties = 0;
    for (std::size_t a = 0; a < m; ++a) {
      ActionString candidate = current.appended(ActionId(a));
      const double v = oracle.evaluate(candidate);
      if (a == 0 || v > best_value) {
        best_value = v;
        best_string = std::move(candidate);
        ties = 1;
      } else if (v == best_value) {
        ++ties;
      }
    }
    current = best_string;
    trace.prefixes.push_back(std::move(best_string));
    trace.values.push_back(best_value);
    trace.per_stage_argmax_ties.push_back(ties);
  }
  return trace;
}

OptimalResult exhaustive_optimal(const ObjectiveOracle& oracle, std::size_t K,
                                 const SolverOptions& options) {
  require_horizon(oracle, K);
  const std::size_t m = oracle.alphabet_size();
  require_within_budget(m, K, options.budget);
  const std::uint64_t count = count_strings(m, 1, K);

  const Best best = detail::parallel_fold(
      count, options.threads, Best{},
      [&](Best& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          const double v = oracle.evaluate(string_at(m, 1, r));
          if (!acc.found || v > acc.value) acc = {true, v, r};
        }
      },
      [](Best& into, Best&& from) {
        if (from.found && (!into.found || from.value > into.value))
          into = from;
      });

  OptimalResult result;
  result.num_evaluated = count;
  if (best.found && best.value >= 0.0) {
    result.argmax = string_at(m, 1, best.rank);
    result.value = best.value;
  }
  return result;
}

double bound_slack(double optimal_value, double tol) {
  return tol * std::max(1.0, std::abs(optimal_value));
}

BoundReport assemble_bound_report(std::size_t K, const GreedyTrace& greedy,
                                  const OptimalResult& optimal,
                                  const CurvatureEstimate& eta,
                                  const CurvatureEstimate& sigma_hat,
                                  double tol) {
  BoundReport report;
  report.greedy_value = greedy.value();
  report.optimal_value = optimal.value;
  if (optimal.value > 0.0) report.ratio = report.greedy_value / optimal.value;

  const double slack = bound_slack(optimal.value, tol);
  report.factor_thm3 = factor_thm3(K);
  report.satisfied_thm3 =
      report.greedy_value >= report.factor_thm3 * optimal.value - slack;

  if (eta.applicable) {
    report.eta = eta.value;
    if (eta.value > 0.0 && eta.value <= 1.0) {
      report.factor_thm4 = factor_curved(eta.value, K);
      report.satisfied_thm4 =
          report.greedy_value >= *report.factor_thm4 * optimal.value - slack;
    }
  }
  if (sigma_hat.applicable) {
    report.sigma_hat = sigma_hat.value;
    if (sigma_hat.value > 0.0 && sigma_hat.value <= 1.0)
      report.factor_thm2 = factor_curved(sigma_hat.value, K);
  }
  return report;
}

BoundReport bound_report(const ObjectiveOracle& oracle, std::size_t K,
                         const GreedyTrace& greedy_trace,
                         const OptimalResult& optimal, double tol,
                         const SolverOptions& options) {
  CheckOptions check;
  check.tol = tol;
  check.budget = options.budget;
  check.threads = options.threads;
  return assemble_bound_report(
      K, greedy_trace, optimal, compute_eta(oracle, K, greedy_trace, optimal),
      compute_sigma_restricted(oracle, K, check), tol);
}

BoundReport bound_report(const ObjectiveOracle& oracle, std::size_t K,
                         double tol, const SolverOptions& options) {
  const GreedyTrace trace = greedy(oracle, K);
  const OptimalResult optimal = exhaustive_optimal(oracle, K, options);
  return bound_report(oracle, K, trace, optimal, tol, options);
}

}  // namespace strsub
