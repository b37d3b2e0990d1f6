#include "strsub/properties.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "strsub/detail/parallel.hpp"

namespace strsub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running minimum of inequality slack. Strict comparison keeps the first
// violation in enumeration order.
struct Worst {
  double margin = kInf;
  std::optional<Counterexample> witness;
  std::uint64_t checked = 0;

  void offer(double margin_value, const auto& make_witness) {
    ++checked;
    if (margin_value < margin) {
      margin = margin_value;
      witness = make_witness();
    }
  }

  static void merge(Worst& into, Worst&& from) {
    into.checked += from.checked;
    if (from.margin < into.margin) {
      into.margin = from.margin;
      into.witness = std::move(from.witness);
    }
  }
};

PropertyReport finish(Property property, Worst&& worst, double tol) {
  PropertyReport report;
  report.property = property;
  report.worst_margin = worst.margin;
  report.num_checked = worst.checked;
  report.holds = worst.margin >= -tol;
  if (!report.holds) report.counterexample = std::move(worst.witness);
  return report;
}

void require_horizon(const ObjectiveOracle& oracle, std::size_t K) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (K > oracle.horizon())
    throw std::invalid_argument("K exceeds the oracle horizon");
}

PropertyReport not_applicable(Property property, std::string reason) {
  PropertyReport report;
  report.property = property;
  report.applicable = false;
  report.reason_if_not = std::move(reason);
  report.holds = false;
  report.worst_margin = std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace

std::string_view property_name(Property p) {
  switch (p) {
    case Property::kKMonotone:
      return "K-monotone";
    case Property::kKDiminishing:
      return "K-diminishing";
    case Property::kKSubmodular:
      return "K-submodular";
    case Property::kPostfixMonotoneRestricted:
      return "postfix-monotone-restricted";
    case Property::kKGoConcave:
      return "K-GO-concave";
  }
  return "unknown";
}

std::string Counterexample::describe() const {
  std::string out = "M=" + m.to_string() + " N=" + n.to_string();
  if (action) out += " a=" + std::to_string(action->index);
  if (stage) out += " i=" + std::to_string(*stage);
  return out;
}

PropertyReport check_k_monotone(const ObjectiveOracle& oracle, std::size_t K,
                                const CheckOptions& options) {
  require_horizon(oracle, K);
  const std::size_t m = oracle.alphabet_size();
  require_within_budget(m, K, options.budget);

  // Single-action appends suffice: f(M ⊕ N) - f(M) telescopes over the
  // actions of N, so any violation shows up as a one-step drop.
  Worst worst = detail::parallel_fold(
      count_strings(m, 0, K - 1), options.threads, Worst{},
      [&](Worst& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          const ActionString head = string_at(m, 0, r);
          const double f_head = oracle.evaluate(head);
          for (std::size_t a = 0; a < m; ++a) {
            const double margin =
                oracle.evaluate(head.appended(ActionId(a))) - f_head;
            acc.offer(margin, [&] {
              return Counterexample{head, ActionString{a}, {}, {}};
            });
          }
        }
      },
      Worst::merge);
  return finish(Property::kKMonotone, std::move(worst), options.tol);
}

PropertyReport check_postfix_monotone_restricted(const ObjectiveOracle& oracle,
                                                 std::size_t K,
                                                 const CheckOptions& options) {
  require_horizon(oracle, K);
  const std::size_t m = oracle.alphabet_size();
  require_within_budget(m, K, options.budget);

  Worst worst = detail::parallel_fold(
      count_strings(m, 1, K), options.threads, Worst{},
      [&](Worst& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          const ActionString head = string_at(m, 1, r);
          for_each_string(m, 0, K - head.length(), [&](const ActionString& tail) {
            const double margin =
                oracle.evaluate(concat(head, tail)) - oracle.evaluate(tail);
            acc.offer(margin, [&] { return Counterexample{head, tail, {}, {}}; });
          });
        }
      },
      Worst::merge);
  return finish(Property::kPostfixMonotoneRestricted, std::move(worst),
                options.tol);
}

PropertyReport check_k_diminishing(const ObjectiveOracle& oracle,
                                   std::size_t K,
                                   const CheckOptions& options) {
  require_horizon(oracle, K);
  const std::size_t m = oracle.alphabet_size();
  require_within_budget(m, K, options.budget);
  if (K == 1) return finish(Property::kKDiminishing, Worst{}, options.tol);

  Worst worst = detail::parallel_fold(
      count_strings(m, 1, K - 1), options.threads, Worst{},
      [&](Worst& acc, std::uint64_t begin, std::uint64_t end) {
        std::vector<double> gain_long(m);
        for (std::uint64_t r = begin; r < end; ++r) {
          const ActionString longer = string_at(m, 1, r);
          const double f_long = oracle.evaluate(longer);
          for (std::size_t a = 0; a < m; ++a)
            gain_long[a] =
                oracle.evaluate(longer.appended(ActionId(a))) - f_long;

          for (std::size_t len = 0; len < longer.length(); ++len) {
            const ActionString shorter = longer.prefix(len);
            const double f_short = oracle.evaluate(shorter);
            for (std::size_t a = 0; a < m; ++a) {
              const double gain_short =
                  oracle.evaluate(shorter.appended(ActionId(a))) - f_short;
              acc.offer(gain_short - gain_long[a], [&] {
                return Counterexample{shorter, longer, ActionId(a), {}};
              });
            }
          }
        }
      },
      Worst::merge);
  return finish(Property::kKDiminishing, std::move(worst), options.tol);
}

PropertyReport combine_k_submodular(const PropertyReport& monotone,
                                    const PropertyReport& diminishing) {
  PropertyReport report;
  report.property = Property::kKSubmodular;
  report.holds = monotone.holds && diminishing.holds;
  report.num_checked = monotone.num_checked + diminishing.num_checked;
  const PropertyReport& worse =
      diminishing.worst_margin < monotone.worst_margin ? diminishing
                                                       : monotone;
  report.worst_margin = worse.worst_margin;
  if (!report.holds) report.counterexample = worse.counterexample;
  return report;
}

PropertyReport check_k_submodular(const ObjectiveOracle& oracle, std::size_t K,
                                  const CheckOptions& options) {
  return combine_k_submodular(check_k_monotone(oracle, K, options),
                              check_k_diminishing(oracle, K, options));
}

PropertyReport check_go_concavity(const ObjectiveOracle& oracle, std::size_t K,
                                  const GreedyTrace& greedy,
                                  const OptimalResult& optimal,
                                  const CheckOptions& options) {
  require_horizon(oracle, K);
  if (greedy.horizon() < K)
    throw std::invalid_argument("greedy trace shorter than K");
  if (optimal.argmax.length() != K)
    return not_applicable(Property::kKGoConcave,
                          "optimal string has length " +
                              std::to_string(optimal.argmax.length()) +
                              " < K");

  const double f_opt = optimal.value;
  const double horizon = static_cast<double>(K);
  Worst worst;
  for (std::size_t i = 1; i < K; ++i) {
    const ActionString& head = greedy.prefix(i);
    const ActionString tail = optimal.argmax.suffix_from(i);
    const double weight = static_cast<double>(i) / horizon;
    const double lhs = oracle.evaluate(concat(head, tail));
    const double rhs = weight * greedy.value_at(i) + (1.0 - weight) * f_opt;
    worst.offer(lhs - rhs,
                [&] { return Counterexample{head, tail, {}, i}; });
  }
  return finish(Property::kKGoConcave, std::move(worst), options.tol);
}

CurvatureEstimate compute_eta(const ObjectiveOracle& oracle, std::size_t K,
                              const GreedyTrace& greedy,
                              const OptimalResult& optimal) {
  CurvatureEstimate est;
  if (K < 2) {
    est.reason_if_not = "max over empty index set (K=1)";
    return est;
  }
  if (greedy.horizon() < K)
    throw std::invalid_argument("greedy trace shorter than K");
  if (optimal.argmax.length() != K) {
    est.reason_if_not = "optimal string shorter than K";
    return est;
  }
  for (std::size_t i = 1; i < K; ++i) {
    if (!(greedy.value_at(i) > 0.0)) {
      est.reason_if_not = "f(G_" + std::to_string(i) + ") <= 0";
      return est;
    }
  }

  const double horizon = static_cast<double>(K);
  const double f_opt = optimal.value;
  for (std::size_t i = 1; i < K; ++i) {
    const double f_gi = greedy.value_at(i);
    const double rest = static_cast<double>(K - i);
    const double spliced =
        oracle.evaluate(concat(greedy.prefix(i), optimal.argmax.suffix_from(i)));
    const double q =
        (horizon * f_gi - (horizon * spliced - rest * f_opt)) / (rest * f_gi);
    if (!est.applicable || q > est.value) {
      est.applicable = true;
      est.value = q;
      est.stage = i;
    }
  }
  return est;
}

CurvatureEstimate compute_sigma_restricted(const ObjectiveOracle& oracle,
                                           std::size_t K,
                                           const CheckOptions& options) {
  require_horizon(oracle, K);
  const std::size_t m = oracle.alphabet_size();
  require_within_budget(m, K, options.budget);

  CurvatureEstimate est;
  if (K < 2) {
    est.reason_if_not = "no continuation M with 1 <= |M| <= K-1 (K=1)";
    return est;
  }

  std::vector<double> single(m);
  std::vector<std::size_t> positive;
  for (std::size_t a = 0; a < m; ++a) {
    single[a] = oracle.evaluate(ActionString{a});
    if (single[a] > 0.0)
      positive.push_back(a);
    else
      ++est.skipped_actions;
  }
  if (positive.empty()) {
    est.reason_if_not = "no action with positive value";
    return est;
  }

  struct Max {
    bool found = false;
    double value = 0.0;
    std::size_t action = 0;
    std::uint64_t rank = 0;
  };
  const std::uint64_t per_action = count_strings(m, 1, K - 1);
  const Max best = detail::parallel_fold(
      per_action * positive.size(), options.threads, Max{},
      [&](Max& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
          const std::size_t a = positive[r / per_action];
          const std::uint64_t rank = r % per_action;
          const ActionString cont = string_at(m, 1, rank);
          const double gain =
              oracle.evaluate(concat(ActionString{a}, cont)) -
              oracle.evaluate(cont);
          const double q = (single[a] - gain) / single[a];
          if (!acc.found || q > acc.value) acc = {true, q, a, rank};
        }
      },
      [](Max& into, Max&& from) {
        if (from.found && (!into.found || from.value > into.value))
          into = from;
      });

  est.applicable = true;
  est.value = best.value;
  est.action = ActionId(best.action);
  est.continuation = string_at(m, 1, best.rank);
  return est;
}

double factor_thm3(std::size_t K) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  const double k = static_cast<double>(K);
  return 1.0 - std::pow(1.0 - 1.0 / k, k);
}

double factor_curved(double c, std::size_t K) {
  if (!(c > 0.0 && c <= 1.0))
    throw std::domain_error("curvature out of range: " + std::to_string(c));
  if (K == 0) throw std::invalid_argument("K must be positive");
  const double k = static_cast<double>(K);
  return (1.0 - std::pow(1.0 - c / k, k)) / c;
}

double factor_curved_limit(double c) {
  if (!(c > 0.0 && c <= 1.0))
    throw std::domain_error("curvature out of range: " + std::to_string(c));
  return -std::expm1(-c) / c;
}

}  // namespace strsub
