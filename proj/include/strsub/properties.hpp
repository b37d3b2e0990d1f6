#pragma once

// Exhaustive checks of the length-restricted submodularity conditions and the
// two curvature quantities that sharpen the greedy bound.
//
// Every check walks all strings of length <= K, so the cost is dominated by
// sum_{k<=K} m^k oracle calls (times small polynomial factors). Margins are
// slacks of the checked inequality: lhs - rhs for ">=" relations. A property
// holds when its worst margin is >= -tol.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "strsub/core.hpp"
#include "strsub/objective.hpp"
#include "strsub/optimize.hpp"

namespace strsub {

enum class Property {
  kKMonotone,
  kKDiminishing,
  kKSubmodular,
  kPostfixMonotoneRestricted,
  kKGoConcave,
};

std::string_view property_name(Property p);

/// The strings (and action or stage) realizing a violated inequality.
///
///   K-monotone:          f(m ⊕ n) >= f(m)
///   postfix-monotone:    f(m ⊕ n) >= f(n)
///   K-diminishing:       f(m ⊕ (a)) - f(m) >= f(n ⊕ (a)) - f(n),  m ⪯ n
///   K-GO-concave:        m = G_i, n = (o_{i+1}, ..., o_K), stage = i
struct Counterexample {
  ActionString m;
  ActionString n;
  std::optional<ActionId> action;
  std::optional<std::size_t> stage;

  std::string describe() const;
};

struct PropertyReport {
  Property property = Property::kKMonotone;
  bool applicable = true;
  std::string reason_if_not;
  bool holds = true;
  // +infinity when nothing was checked.
  double worst_margin = 0.0;
  std::optional<Counterexample> counterexample;
  std::uint64_t num_checked = 0;
};

struct CurvatureEstimate {
  bool applicable = false;
  double value = 0.0;
  std::string reason_if_not;
  // eta: greedy stage i. sigma_hat: leading action a and continuation M.
  std::optional<std::size_t> stage;
  std::optional<ActionId> action;
  std::optional<ActionString> continuation;
  // sigma_hat only: actions with f((a)) <= 0 that were skipped.
  std::size_t skipped_actions = 0;
};

struct CheckOptions {
  double tol = kDefaultTol;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;

  SolverOptions solver() const { return {budget, threads}; }
};

PropertyReport check_k_monotone(const ObjectiveOracle& oracle, std::size_t K,
                                const CheckOptions& options = {});

PropertyReport check_postfix_monotone_restricted(
    const ObjectiveOracle& oracle, std::size_t K,
    const CheckOptions& options = {});

// Compares each proper prefix M of N (|N| <= K-1) against N for every action.
PropertyReport check_k_diminishing(const ObjectiveOracle& oracle,
                                   std::size_t K,
                                   const CheckOptions& options = {});

PropertyReport check_k_submodular(const ObjectiveOracle& oracle, std::size_t K,
                                  const CheckOptions& options = {});

// Conjunction of the two reports; worst_margin is the smaller one.
PropertyReport combine_k_submodular(const PropertyReport& monotone,
                                    const PropertyReport& diminishing);

/// Not applicable when the optimal string is shorter than K.
PropertyReport check_go_concavity(const ObjectiveOracle& oracle, std::size_t K,
                                  const GreedyTrace& greedy,
                                  const OptimalResult& optimal,
                                  const CheckOptions& options = {});

/// eta = max_{1<=i<=K-1} [K f(G_i) - (K f(G_i ⊕ Ō_{K-i}) - (K-i) f(O_K))]
///                        / [(K-i) f(G_i)]
CurvatureEstimate compute_eta(const ObjectiveOracle& oracle, std::size_t K,
                              const GreedyTrace& greedy,
                              const OptimalResult& optimal);

/// Total backward curvature with the continuation restricted to
/// 1 <= |M| <= K-1, so it is a lower bound on the unrestricted quantity.
CurvatureEstimate compute_sigma_restricted(const ObjectiveOracle& oracle,
                                           std::size_t K,
                                           const CheckOptions& options = {});

/// 1 - (1 - 1/K)^K.
double factor_thm3(std::size_t K);

/// (1/c)(1 - (1 - c/K)^K) for c in (0, 1]. Throws std::domain_error otherwise.
double factor_curved(double c, std::size_t K);

/// (1/c)(1 - e^{-c}), the K -> infinity limit of factor_curved.
double factor_curved_limit(double c);

}  // namespace strsub
