#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "strsub/adaptive_measurement.hpp"
#include "strsub/properties.hpp"

namespace strsub::measurement {
namespace {

// Diagonal posterior precision, accumulated by hand.
double information_gain(const std::vector<double>& sigma_sq,
                        const std::vector<double>& e) {
  double s = 1.0;
  double t = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    s += e[j] / sigma_sq[j];
    t += (1.0 - e[j]) / sigma_sq[j];
  }
  return 0.5 * std::log(s * t);
}

TEST(Objective, SingleStage) {
  const MeasurementInstance inst({1.0}, {0.5, 1.0});
  EXPECT_NEAR(objective_matrix(inst, ActionString{0}), std::log(1.5), 1e-15);
  EXPECT_NEAR(objective_matrix(inst, ActionString{0}), 0.405465, 1e-6);
  EXPECT_NEAR(objective_matrix(inst, ActionString{1}), 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(objective_matrix(inst, ActionString{1}), 0.346574, 1e-6);
  EXPECT_EQ(objective_matrix(inst, ActionString{}), 0.0);
  EXPECT_EQ(objective_closed_form(inst, ActionString{}), 0.0);
}

TEST(Objective, TwoStages) {
  const MeasurementInstance a({1.0, 1.0}, {0.5, 1.0});
  EXPECT_NEAR(objective_closed_form(a, ActionString{0, 0}), std::log(2.0), 1e-15);
  const MeasurementInstance b({1.0, 2.0}, {0.5, 1.0});
  EXPECT_NEAR(objective_closed_form(b, ActionString{1, 1}), 0.5 * std::log(2.5), 1e-15);
  EXPECT_NEAR(objective_matrix(b, ActionString{1, 1}), 0.458145, 1e-6);
}

TEST(Objective, ClosedFormMatchesMatrixAndHand) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t K = 1 + seed % 4;
    const std::size_t m = 1 + (seed / 4) % 4;
    const auto inst = random_instance(seed, K, m, SigmaOrder::kUnordered);
    for_each_string(m, 0, K, [&](const ActionString& s) {
      std::vector<double> e;
      for (ActionId a : s) e.push_back(inst.e(a));
      const double closed = objective_closed_form(inst, s);
      EXPECT_NEAR(closed, objective_matrix(inst, s), 1e-12);
      EXPECT_NEAR(closed, information_gain(inst.sigma_sq(), e), 1e-14);
    });
  }
}

TEST(Objective, OraclePaths) {
  const auto inst = random_instance(4, 3, 5, SigmaOrder::kNonDecreasing);
  const MeasurementObjective closed(inst);
  const MeasurementObjective matrix(inst, MeasurementObjective::Path::kMatrix);
  EXPECT_EQ(closed.horizon(), 3u);
  EXPECT_EQ(closed.alphabet_size(), 5u);
  EXPECT_NEAR(closed(ActionString{4, 2, 0}), matrix(ActionString{4, 2, 0}), 1e-12);
}

TEST(Instance, Validation) {
  EXPECT_THROW(MeasurementInstance({1.0}, {0.4, 1.0}), std::invalid_argument);
  EXPECT_THROW(MeasurementInstance({1.0}, {0.8, 0.6}), std::invalid_argument);
  EXPECT_THROW(MeasurementInstance({0.0}, {0.5}), std::invalid_argument);
  EXPECT_THROW(MeasurementInstance({}, {0.5}), std::invalid_argument);
  const auto grid = uniform_grid(11);
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_EQ(grid.front(), 0.5);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_NEAR(grid[1], 0.55, 1e-15);
  EXPECT_EQ(uniform_grid(1), std::vector<double>{0.5});
}

TEST(SigmaCondition, Examples) {
  EXPECT_TRUE(check_sigma_condition(MeasurementInstance({1, 1, 1}, {0.5})).holds);
  const auto b = check_sigma_condition(MeasurementInstance({1, 2, 4}, {0.5}));
  EXPECT_TRUE(b.holds);
  EXPECT_EQ(b.margins, (std::vector<double>{1.0, 2.0}));
  const auto c = check_sigma_condition(MeasurementInstance({2, 1}, {0.5}));
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.worst_margin, -1.0);
  EXPECT_TRUE(std::isinf(check_sigma_condition(MeasurementInstance({3}, {0.5})).worst_margin));
}

TEST(PriorCondition, Examples) {
  const auto close = check_prior_condition(2, 1.0, 1.05);
  const double ib = 1.0 / (1.05 * 1.05);
  EXPECT_NEAR(close.lhs, ib / (1.0 - ib), 1e-12);
  EXPECT_NEAR(close.lhs, 9.756, 1e-3);
  EXPECT_NEAR(close.rhs, 1.0 + ib + 1.0, 1e-12);
  EXPECT_NEAR(close.rhs, 2.907, 1e-3);
  EXPECT_TRUE(close.holds);

  const auto wide = check_prior_condition(5, 1.0, 2.0);
  EXPECT_NEAR(wide.lhs, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(wide.rhs, 21.0, 1e-12);
  EXPECT_FALSE(wide.holds);

  const auto flat = check_prior_condition(4, 1.5, 1.5);
  EXPECT_TRUE(flat.holds);
  EXPECT_TRUE(flat.degenerate);
  EXPECT_TRUE(std::isinf(flat.lhs));
}

TEST(PriorCondition, WeakerThanSigmaOrder) {
  const MeasurementInstance inst({1, 1.5, 2, 3, 4}, uniform_grid(3));
  EXPECT_TRUE(check_sigma_condition(inst).holds);
  const auto r = check_prior_condition(inst, 1.0, 2.0);
  EXPECT_FALSE(r.holds);
  const auto tight = check_prior_condition(inst);
  EXPECT_EQ(tight.a, 1.0);
  EXPECT_EQ(tight.b, 2.0);
  EXPECT_FALSE(tight.holds);
  EXPECT_THROW(check_prior_condition(inst, 1.2, 2.0), std::invalid_argument);
}

TEST(FirstStage, GreedyMatchesOptimalUnderOrder) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = random_instance(seed, 1 + seed % 3, 11, SigmaOrder::kNonDecreasing);
    const MeasurementObjective f(inst);
    const std::size_t K = inst.K();
    const auto g = greedy(f, K);
    const auto o = exhaustive_optimal(f, K);
    const auto r = verify_g1_equals_o1(inst, o, g);
    EXPECT_TRUE(r.equal);
    EXPECT_EQ(r.gap, 0.0);
    EXPECT_GE(r.stage1_product, 0.0);
  }
}

TEST(FirstStage, SymmetricTie) {
  const MeasurementInstance inst({2.0, 2.0}, uniform_grid(5));
  const MeasurementObjective f(inst);
  const auto r = verify_g1_equals_o1(inst, exhaustive_optimal(f, 2), greedy(f, 2));
  EXPECT_TRUE(r.equal);
}

TEST(Submodularity, HoldsUnderOrder) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_instance(seed, 3, 3, SigmaOrder::kNonDecreasing);
    const MeasurementObjective f(inst);
    EXPECT_TRUE(check_k_monotone(f, 3).holds);
    EXPECT_TRUE(check_k_diminishing(f, 3).holds) << seed;
    const auto g = greedy(f, 3);
    const auto o = exhaustive_optimal(f, 3);
    EXPECT_TRUE(check_go_concavity(f, 3, g, o).holds);
    EXPECT_GE(g.value(), factor_thm3(3) * o.value - 1e-9);
  }
}

TEST(GoTerms, SmallExample) {
  const MeasurementInstance inst({1.0, 1.0}, {0.5, 0.75, 1.0});
  const MeasurementObjective f(inst);
  const auto g = greedy(f, 2);
  const auto o = exhaustive_optimal(f, 2);
  const auto t = go_inequality_terms(inst, g, o, 1);
  EXPECT_TRUE(t.holds);
  EXPECT_LE(t.lhs, t.rhs * (1 + 1e-12));
  EXPECT_EQ(t.c_k, 4.0);
  EXPECT_EQ(t.a_i, 3.0);
  EXPECT_TRUE(check_go_concavity(f, 2, g, o).holds);
  EXPECT_THROW(go_inequality_terms(inst, g, o, 2), std::out_of_range);
  EXPECT_THROW(go_inequality_terms(inst, g, o, 0), std::out_of_range);
}

// The closed-form inequality is the generic one, exponentiated: the log
// ratio rhs/lhs equals 2K times the generic slack.
TEST(GoTerms, LogRatioIsScaledGenericMargin) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto order = seed % 2 ? SigmaOrder::kNonIncreasing : SigmaOrder::kUnordered;
    const std::size_t K = 2 + seed % 3;
    const auto inst = random_instance(seed, K, 4, order);
    const MeasurementObjective f(inst);
    const auto g = greedy(f, K);
    const auto o = exhaustive_optimal(f, K);
    for (std::size_t i = 1; i < K; ++i) {
      const double w = static_cast<double>(i) / K;
      const double generic =
          f(concat(g.prefix(i), o.argmax.suffix_from(i))) - (w * g.value_at(i) + (1 - w) * o.value);
      const auto t = go_inequality_terms(inst, g, o, i);
      EXPECT_NEAR(std::log(t.rhs) - std::log(t.lhs), 2.0 * K * generic, 1e-9);
      EXPECT_EQ(t.holds, generic >= -1e-9);
    }
  }
}

// Solver outputs never violate the inequality here, so arbitrary (G, O)
// pairs are used to reach the failing side as well.
TEST(GoTerms, ArbitraryPairsAgreeWithGenericCheck) {
  std::mt19937_64 rng(77);
  int failing = 0, holding = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t K = 2 + trial % 3;
    const std::size_t m = 3;
    const auto inst = random_instance(900 + trial, K, m, SigmaOrder::kUnordered);
    const MeasurementObjective f(inst);
    auto draw = [&] {
      std::vector<ActionId> a(K);
      for (auto& x : a) x = ActionId(rng() % m);
      return ActionString(std::move(a));
    };
    const ActionString gs = draw();
    GreedyTrace g;
    for (std::size_t i = 1; i <= K; ++i) {
      g.prefixes.push_back(gs.prefix(i));
      g.values.push_back(f(gs.prefix(i)));
      g.per_stage_argmax_ties.push_back(1);
    }
    OptimalResult o;
    o.argmax = draw();
    o.value = f(o.argmax);
    for (std::size_t i = 1; i < K; ++i) {
      const double w = static_cast<double>(i) / K;
      const double generic =
          f(concat(g.prefix(i), o.argmax.suffix_from(i))) - (w * g.value_at(i) + (1 - w) * o.value);
      const auto t = go_inequality_terms(inst, g, o, i);
      EXPECT_NEAR(std::log(t.rhs) - std::log(t.lhs), 2.0 * K * generic, 1e-9);
      if (std::abs(generic) > 1e-9) {
        EXPECT_EQ(t.holds, generic > 0.0);
        (generic > 0.0 ? holding : failing)++;
      }
    }
  }
  EXPECT_GT(failing, 10);
  EXPECT_GT(holding, 50);
}

// Both solvers pick the smallest grid value at every stage.
TEST(Structure, GreedyAlwaysOptimal) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = random_instance(seed, 3, 5, SigmaOrder::kUnordered);
    const MeasurementObjective f(inst);
    const auto g = greedy(f, 3);
    const auto o = exhaustive_optimal(f, 3);
    EXPECT_EQ(g.result(), (ActionString{0, 0, 0}));
    EXPECT_EQ(o.argmax, g.result());
  }
}

TEST(Random, Ordering) {
  const auto up = random_instance(3, 6, 4, SigmaOrder::kNonDecreasing);
  EXPECT_TRUE(check_sigma_condition(up).holds);
  const auto down = random_instance(3, 6, 4, SigmaOrder::kNonIncreasing);
  EXPECT_FALSE(check_sigma_condition(down).holds);
  EXPECT_EQ(random_instance(8, 3, 4, SigmaOrder::kUnordered),
            random_instance(8, 3, 4, SigmaOrder::kUnordered));
}

}  // namespace
}  // namespace strsub::measurement
