#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "strsub/adaptive_measurement.hpp"
#include "strsub/properties.hpp"
#include "strsub/task_assignment.hpp"

namespace strsub {
namespace {

double len(const ActionString& s) { return static_cast<double>(s.length()); }

std::map<ActionString, double> random_table(std::mt19937_64& rng, std::size_t m,
                                            std::size_t K) {
  std::map<ActionString, double> t;
  for_each_string(m, 1, K, [&](const ActionString& s) {
    t[s] = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  });
  return t;
}

// Recomputes the slack of the violated inequality straight from the oracle.
double replay(const ObjectiveOracle& f, const PropertyReport& r,
              const GreedyTrace* g = nullptr, const OptimalResult* o = nullptr) {
  const Counterexample& c = *r.counterexample;
  switch (r.property) {
    case Property::kKMonotone:
      return f(concat(c.m, c.n)) - f(c.m);
    case Property::kPostfixMonotoneRestricted:
      return f(concat(c.m, c.n)) - f(c.n);
    case Property::kKDiminishing:
      return (f(c.m.appended(*c.action)) - f(c.m)) -
             (f(c.n.appended(*c.action)) - f(c.n));
    case Property::kKGoConcave: {
      const double w = static_cast<double>(*c.stage) / static_cast<double>(o->argmax.length());
      return f(concat(c.m, c.n)) - (w * g->value_at(*c.stage) + (1.0 - w) * o->value);
    }
    default:
      return 0.0;
  }
}

TEST(Monotone, TaskModelHolds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = task::random_instance(seed, 2, 3, 3, 0.01, 0.99);
    const task::TaskAssignmentObjective f(inst);
    const auto r = check_k_monotone(f, 3);
    EXPECT_TRUE(r.holds);
    EXPECT_GT(r.worst_margin, 0.0);
    EXPECT_FALSE(r.counterexample);
    EXPECT_EQ(r.num_checked, 3u * (1 + 3 + 9));
  }
}

TEST(Monotone, NegativeLengthFails) {
  const FunctionOracle f(2, 2, [](const ActionString& s) { return -len(s); });
  const auto r = check_k_monotone(f, 2);
  EXPECT_FALSE(r.holds);
  EXPECT_DOUBLE_EQ(r.worst_margin, -1.0);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->m, ActionString{});
  EXPECT_EQ(r.counterexample->n, ActionString{0});
}

TEST(Monotone, MeasurementModelHolds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = measurement::random_instance(seed, 3, 3, measurement::SigmaOrder::kUnordered);
    const measurement::MeasurementObjective f(inst);
    EXPECT_TRUE(check_k_monotone(f, 3).holds);
  }
}

TEST(Diminishing, SquaredLengthFails) {
  const FunctionOracle f(2, 3, [](const ActionString& s) { return len(s) * len(s); });
  EXPECT_TRUE(check_k_monotone(f, 3).holds);
  const auto r = check_k_diminishing(f, 3);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.counterexample);
  EXPECT_LT(replay(f, r), 0.0);
  EXPECT_FALSE(check_k_submodular(f, 3).holds);
}

TEST(Diminishing, TaskConditionRegion) {
  // L = 0.6, U = 0.9 satisfies the analytic sufficient condition.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = task::random_instance(seed, 1, 2, 3, 0.6, 0.9);
    const task::TaskAssignmentObjective f(inst);
    EXPECT_TRUE(check_k_diminishing(f, 3).holds);
    EXPECT_TRUE(check_k_submodular(f, 3).holds);
  }
}

TEST(Diminishing, SingleActionClosedForm) {
  const double p = 0.3;
  const auto inst = task::constant_instance({p}, 4);
  const task::TaskAssignmentObjective f(inst);
  const auto r = check_k_diminishing(f, 4);
  EXPECT_TRUE(r.holds);
  // Smallest gap between consecutive gains (1-p)^k p is at k = K-2.
  EXPECT_NEAR(r.worst_margin, p * p * (1 - p) * (1 - p), 1e-15);
}

TEST(Diminishing, DecreasingNoiseCanFail) {
  const measurement::MeasurementInstance inst({4.0, 0.25}, {0.5, 1.0});
  const measurement::MeasurementObjective f(inst);
  const auto r = check_k_diminishing(f, 2);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.counterexample);
  EXPECT_TRUE(r.counterexample->action);
  EXPECT_NEAR(replay(f, r), r.worst_margin, 1e-15);
}

TEST(Diminishing, KOneChecksNothing) {
  const FunctionOracle f(2, 1, [](const ActionString& s) { return len(s); });
  const auto r = check_k_diminishing(f, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.num_checked, 0u);
  EXPECT_TRUE(std::isinf(r.worst_margin));
}

TEST(Postfix, TaskStageIndependentHolds) {
  const auto inst = task::constant_instance({0.2, 0.6, 0.9}, 3);
  const task::TaskAssignmentObjective f(inst);
  EXPECT_TRUE(check_postfix_monotone_restricted(f, 3).holds);
}

TEST(Postfix, PlantedViolation) {
  std::map<ActionString, double> t = {{{0}, 0.1}, {{1}, 0.9}, {{0, 0}, 0.2}, {{0, 1}, 0.5},
                                      {{1, 0}, 0.95}, {{1, 1}, 1.0}};
  const TableOracle f(2, 2, t);
  const auto r = check_postfix_monotone_restricted(f, 2);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.counterexample->m, ActionString{0});
  EXPECT_EQ(r.counterexample->n, ActionString{1});
  EXPECT_NEAR(r.worst_margin, -0.4, 1e-15);
}

TEST(GoConcavity, TwoActionMargin) {
  const auto inst = task::constant_instance({0.6, 0.7}, 2);
  const task::TaskAssignmentObjective f(inst);
  const auto g = greedy(f, 2);
  const auto o = exhaustive_optimal(f, 2);
  const auto r = check_go_concavity(f, 2, g, o);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.worst_margin, 0.91 - (0.5 * 0.7 + 0.5 * 0.91), 1e-12);
  EXPECT_NEAR(r.worst_margin, 0.105, 1e-12);
}

TEST(GoConcavity, IdenticalActions) {
  const auto inst = task::constant_instance({0.4, 0.4}, 4);
  const task::TaskAssignmentObjective f(inst);
  const auto g = greedy(f, 4);
  const auto o = exhaustive_optimal(f, 4);
  EXPECT_TRUE(check_go_concavity(f, 4, g, o).holds);
}

TEST(GoConcavity, ShortOptimumNotApplicable) {
  const FunctionOracle f(2, 2, [](const ActionString& s) {
    return s == ActionString{1} ? 1.0 : 0.1 * len(s);
  });
  const auto g = greedy(f, 2);
  const auto o = exhaustive_optimal(f, 2);
  ASSERT_EQ(o.argmax, ActionString{1});
  const auto r = check_go_concavity(f, 2, g, o);
  EXPECT_FALSE(r.applicable);
  EXPECT_FALSE(r.reason_if_not.empty());
  EXPECT_FALSE(compute_eta(f, 2, g, o).applicable);
}

TEST(GoConcavity, PlantedViolation) {
  // Greedy takes (0) then (0,0); the optimum is (1,1) but the splice (0,1) is poor.
  std::map<ActionString, double> t = {{{0}, 0.6}, {{1}, 0.5}, {{0, 0}, 0.7}, {{0, 1}, 0.3},
                                      {{1, 0}, 0.55}, {{1, 1}, 1.0}};
  const TableOracle f(2, 2, t);
  const auto g = greedy(f, 2);
  const auto o = exhaustive_optimal(f, 2);
  const auto r = check_go_concavity(f, 2, g, o);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->m, ActionString{0});
  EXPECT_EQ(r.counterexample->n, ActionString{1});
  EXPECT_EQ(r.counterexample->stage, 1u);
  EXPECT_NEAR(r.worst_margin, 0.3 - 0.8, 1e-12);
  EXPECT_NEAR(replay(f, r, &g, &o), r.worst_margin, 1e-15);
}

TEST(Eta, IdenticalActionsHalf) {
  const auto inst = task::constant_instance({0.5, 0.5}, 2);
  const task::TaskAssignmentObjective f(inst);
  const auto g = greedy(f, 2);
  const auto o = exhaustive_optimal(f, 2);
  const auto eta = compute_eta(f, 2, g, o);
  ASSERT_TRUE(eta.applicable);
  // [2(0.5) - (2(0.75) - 0.75)] / 0.5
  EXPECT_NEAR(eta.value, 0.5, 1e-12);
  EXPECT_EQ(eta.stage, 1u);
  EXPECT_NEAR(factor_curved(eta.value, 2), 0.875, 1e-12);
}

TEST(Eta, KOneNotApplicable) {
  const auto inst = task::constant_instance({0.5}, 1);
  const task::TaskAssignmentObjective f(inst);
  const auto eta = compute_eta(f, 1, greedy(f, 1), exhaustive_optimal(f, 1));
  EXPECT_FALSE(eta.applicable);
  EXPECT_NE(eta.reason_if_not.find("empty"), std::string::npos);
}

TEST(Eta, AtMostOneUnderGoConcavity) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = task::random_instance(seed, 1, 3, 3, 0.1, 0.95);
    const task::TaskAssignmentObjective f(inst);
    const auto g = greedy(f, 3);
    const auto o = exhaustive_optimal(f, 3);
    const auto go = check_go_concavity(f, 3, g, o);
    const auto eta = compute_eta(f, 3, g, o);
    if (go.applicable && go.worst_margin >= 0.0 && eta.applicable)
      EXPECT_LE(eta.value, 1.0 + 1e-12) << seed;
  }
}

TEST(SigmaHat, ModularIsZero) {
  const double w[] = {0.2, 0.7, 0.4};
  const FunctionOracle f(3, 3, [&](const ActionString& s) {
    double v = 0.0;
    for (ActionId a : s) v += w[a.index];
    return v;
  });
  const auto s = compute_sigma_restricted(f, 3);
  ASSERT_TRUE(s.applicable);
  EXPECT_NEAR(s.value, 0.0, 1e-12);
}

TEST(SigmaHat, IdenticalActionsHalf) {
  const auto inst = task::constant_instance({0.5}, 2);
  const task::TaskAssignmentObjective f(inst);
  const auto s = compute_sigma_restricted(f, 2);
  ASSERT_TRUE(s.applicable);
  EXPECT_NEAR(s.value, 0.5, 1e-12);
}

TEST(SigmaHat, TaskModelInUnitInterval) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = task::constant_instance({u(rng), u(rng)}, 3);
    const task::TaskAssignmentObjective f(inst);
    const auto s = compute_sigma_restricted(f, 3);
    ASSERT_TRUE(s.applicable);
    EXPECT_GE(s.value, -1e-12);
    EXPECT_LE(s.value, 1.0 + 1e-12);
  }
}

// With stage-dependent probabilities, prepending an action shifts M to later
// stages, f((a) ⊕ M) can drop below f(M), and the ratio exceeds 1.
TEST(SigmaHat, StageDependentCanExceedOne) {
  const task::TaskAssignmentInstance shifted(1, 2, 2, {0.5, 0.9, 0.9, 0.5}, {0.5, 0.5},
                                             {0.9, 0.9});
  const task::TaskAssignmentObjective f(shifted);
  EXPECT_FALSE(check_postfix_monotone_restricted(f, 2).holds);
  const auto s = compute_sigma_restricted(f, 2);
  ASSERT_TRUE(s.applicable);
  EXPECT_GT(s.value, 1.0);
}

TEST(SigmaHat, NoPositiveActionNotApplicable) {
  const FunctionOracle f(2, 2, [](const ActionString& s) { return -len(s); });
  const auto s = compute_sigma_restricted(f, 2);
  EXPECT_FALSE(s.applicable);
  EXPECT_EQ(s.skipped_actions, 2u);
}

TEST(Factors, Values) {
  EXPECT_EQ(factor_thm3(1), 1.0);
  EXPECT_NEAR(factor_thm3(2), 0.75, 1e-15);
  EXPECT_NEAR(factor_thm3(5), 1.0 - std::pow(0.8, 5), 1e-15);
  EXPECT_NEAR(factor_thm3(5), 0.67232, 1e-12);
  EXPECT_NEAR(factor_curved(0.5, 2), 0.875, 1e-15);
  for (std::size_t K = 1; K <= 50; ++K)
    EXPECT_NEAR(factor_curved(1.0, K), factor_thm3(K), 1e-15);
}

TEST(Factors, Monotonicity) {
  const double limit = 1.0 - std::exp(-1.0);
  for (std::size_t K = 1; K < 2000; ++K) {
    EXPECT_GT(factor_thm3(K), factor_thm3(K + 1));
    EXPECT_GT(factor_thm3(K), limit);
  }
  for (double c : {0.1, 0.3, 0.7, 1.0}) {
    for (std::size_t K = 1; K < 200; ++K) {
      EXPECT_GT(factor_curved(c, K), factor_curved(c, K + 1) - 1e-15);
      EXPECT_GE(factor_curved(c, K), factor_thm3(K) - 1e-15);
    }
    EXPECT_NEAR(factor_curved(c, 100000), factor_curved_limit(c), 1e-5);
  }
  EXPECT_NEAR(factor_curved_limit(1.0), limit, 1e-15);
  EXPECT_GT(factor_curved(1e-6, 10), 0.999999);
  // Smaller curvature, larger factor.
  for (std::size_t K : {2u, 5u, 20u})
    EXPECT_GT(factor_curved(0.2, K), factor_curved(0.8, K));
}

TEST(Factors, DomainErrors) {
  EXPECT_THROW(factor_curved(0.0, 3), std::domain_error);
  EXPECT_THROW(factor_curved(1.5, 3), std::domain_error);
  EXPECT_THROW(factor_curved_limit(-0.1), std::domain_error);
  EXPECT_THROW(factor_thm3(0), std::invalid_argument);
}

TEST(Soundness, CounterexamplesReplayOnRandomTables) {
  std::mt19937_64 rng(99);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const TableOracle f(2, 3, random_table(rng, 2, 3));
    const auto g = greedy(f, 3);
    const auto o = exhaustive_optimal(f, 3);
    const std::vector<PropertyReport> reports = {
        check_k_monotone(f, 3), check_k_diminishing(f, 3),
        check_postfix_monotone_restricted(f, 3), check_go_concavity(f, 3, g, o)};
    for (const auto& r : reports) {
      if (!r.applicable || r.holds) continue;
      ++violations;
      ASSERT_TRUE(r.counterexample);
      EXPECT_NEAR(replay(f, r, &g, &o), r.worst_margin, 1e-15);
      EXPECT_LT(r.worst_margin, 0.0);
    }
  }
  EXPECT_GT(violations, 100);
}

TEST(Determinism, ThreadsGiveSameReports) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const TableOracle f(3, 4, random_table(rng, 3, 4));
    CheckOptions one;
    CheckOptions many;
    many.threads = 8;
    for (auto check : {&check_k_monotone, &check_k_diminishing,
                       &check_postfix_monotone_restricted}) {
      const auto a = check(f, 4, one);
      const auto b = check(f, 4, many);
      EXPECT_EQ(a.worst_margin, b.worst_margin);
      EXPECT_EQ(a.num_checked, b.num_checked);
      ASSERT_EQ(a.counterexample.has_value(), b.counterexample.has_value());
      if (a.counterexample) EXPECT_EQ(a.counterexample->describe(), b.counterexample->describe());
    }
    const auto sa = compute_sigma_restricted(f, 4, one);
    const auto sb = compute_sigma_restricted(f, 4, many);
    EXPECT_EQ(sa.value, sb.value);
    EXPECT_EQ(sa.continuation, sb.continuation);
  }
}

}  // namespace
}  // namespace strsub
