#pragma once

// Task assignment: n subtasks, m agents, K stages. Assigning agent a at stage
// j completes subtask i with probability p_i^j(a). The objective is the
// expected fraction of completed subtasks,
//
//   f((a_1..a_k)) = (1/n) sum_i (1 - prod_{j<=k} (1 - p_i^j(a_j))).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "strsub/core.hpp"
#include "strsub/objective.hpp"
#include "strsub/optimize.hpp"

namespace strsub::task {

class TaskAssignmentInstance {
 public:
  /// `p` is row-major [subtask][stage][agent]; `lower`/`upper` are
  /// [subtask][agent]. Requires 0 < L <= p <= U < 1 elementwise.
  TaskAssignmentInstance(std::size_t n, std::size_t m, std::size_t K,
                         std::vector<double> p, std::vector<double> lower,
                         std::vector<double> upper);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t K() const { return K_; }

  double p(std::size_t subtask, std::size_t stage, std::size_t agent) const {
    return p_[(subtask * K_ + stage) * m_ + agent];
  }
  double lower(std::size_t subtask, std::size_t agent) const {
    return lower_[subtask * m_ + agent];
  }
  double upper(std::size_t subtask, std::size_t agent) const {
    return upper_[subtask * m_ + agent];
  }

  const std::vector<double>& p_table() const { return p_; }
  const std::vector<double>& lower_table() const { return lower_; }
  const std::vector<double>& upper_table() const { return upper_; }

  friend bool operator==(const TaskAssignmentInstance&,
                         const TaskAssignmentInstance&) = default;

 private:
  std::size_t n_;
  std::size_t m_;
  std::size_t K_;
  std::vector<double> p_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Stage-independent single-subtask instance with p(agent) = probs[agent]
/// and degenerate intervals L = U = p.
TaskAssignmentInstance constant_instance(const std::vector<double>& probs,
                                         std::size_t K);

double objective(const TaskAssignmentInstance& inst, const ActionString& s);

class TaskAssignmentObjective final : public ObjectiveOracle {
 public:
  explicit TaskAssignmentObjective(const TaskAssignmentInstance& inst)
      : inst_(inst) {}

  std::size_t horizon() const override { return inst_.K(); }
  std::size_t alphabet_size() const override { return inst_.m(); }
  double evaluate(const ActionString& s) const override {
    return objective(inst_, s);
  }

 private:
  const TaskAssignmentInstance& inst_;
};

// Condition results carry margins so parameter sweeps can locate the
// boundary. `extrapolated` marks n > 1, where the extrema are taken over all
// subtasks.

/// L̂ >= (1 - L̂) Û, sufficient for K-diminishing.
struct DiminishingCondition {
  double l_hat = 0.0;
  double u_hat = 0.0;
  double margin = 0.0;
  bool holds = false;
  bool extrapolated = false;
};

/// L̂ >= 1/2.
struct HalfCondition {
  double l_hat = 0.0;
  double margin = 0.0;
  bool holds = false;
  bool extrapolated = false;
};

/// p^1(g_1) >= 1 - c^K with c = min_a (1 - U(a)) / (1 - L(a)).
struct PriorCondition {
  double c = 0.0;
  double threshold = 0.0;
  double first_value = 0.0;
  double margin = 0.0;
  bool holds = false;
};

enum class GoIndex {
  // prod_{j=i+1..K} (1 - p^j(o_i)), the product with o_i held fixed.
  kOi,
  // prod_{j=i+1..K} (1 - p^j(o_j)), the failure probability of Ō_{K-i}.
  kOj,
};

/// prod_{j=i+1..K} (1 - p^j(·)) <= i/K for i = 1..K-1.
struct GoCondition {
  GoIndex index = GoIndex::kOi;
  std::vector<double> products;  // entry i-1 for stage i
  std::vector<double> margins;   // i/K - product
  double worst_margin = 0.0;
  bool holds = true;
};

DiminishingCondition check_diminishing_condition(
    const TaskAssignmentInstance& inst);
HalfCondition check_half_condition(const TaskAssignmentInstance& inst);

// Throws std::invalid_argument unless n == 1.
PriorCondition check_prior_condition(const TaskAssignmentInstance& inst,
                                     double greedy_first_value);

// Throws std::invalid_argument unless n == 1 and |optimal.argmax| == K.
GoCondition check_go_condition(const TaskAssignmentInstance& inst,
                               const OptimalResult& optimal,
                               GoIndex index = GoIndex::kOi);

/// Entries uniform in [p_low, p_high], L = p_low and U = p_high everywhere.
/// Same arguments give a bit-identical instance.
TaskAssignmentInstance random_instance(std::uint64_t seed, std::size_t n,
                                       std::size_t m, std::size_t K,
                                       double p_low, double p_high);

}  // namespace strsub::task
