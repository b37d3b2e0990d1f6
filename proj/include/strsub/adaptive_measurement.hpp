#pragma once

// Measurement design for x ~ N(0, I) in R^2. Stage j observes
// y_j = A_j x + w_j with A_j = Diag(sqrt(e_j), sqrt(1 - e_j)), e_j in [0.5, 1],
// and w_j ~ N(0, sigma_j^2 I). The objective is the information gain
// H_0 - H_k = -(1/2) ln det P_k (natural log).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "strsub/core.hpp"
#include "strsub/objective.hpp"
#include "strsub/optimize.hpp"

namespace strsub::measurement {

inline constexpr std::size_t kDim = 2;
inline constexpr double kGridMin = 0.5;
inline constexpr double kGridMax = 1.0;
inline constexpr std::size_t kDefaultGridPoints = 101;

class MeasurementInstance {
 public:
  /// Horizon K = sigma_sq.size(). The grid must be strictly increasing and
  /// lie in [0.5, 1]; every variance must be positive.
  MeasurementInstance(std::vector<double> sigma_sq, std::vector<double> e_grid);

  std::size_t K() const { return sigma_sq_.size(); }
  std::size_t grid_size() const { return e_grid_.size(); }
  double sigma_sq(std::size_t stage) const { return sigma_sq_[stage]; }
  double e(ActionId a) const { return e_grid_[a.index]; }
  const std::vector<double>& sigma_sq() const { return sigma_sq_; }
  const std::vector<double>& e_grid() const { return e_grid_; }

  friend bool operator==(const MeasurementInstance&,
                         const MeasurementInstance&) = default;

 private:
  std::vector<double> sigma_sq_;
  std::vector<double> e_grid_;
};

/// `count` evenly spaced points in [lo, hi], endpoints included.
std::vector<double> uniform_grid(std::size_t count, double lo = kGridMin,
                                 double hi = kGridMax);

/// Diagonal of the posterior precision: S = 1 + sum e_j / sigma_j^2,
/// T = 1 + sum (1 - e_j) / sigma_j^2.
struct PosteriorState {
  double s = 1.0;
  double t = 1.0;
};

PosteriorState accumulate(const MeasurementInstance& inst,
                          const ActionString& s);

/// Iterates P_k = (P_{k-1}^{-1} + A_k^T A_k / sigma_k^2)^{-1} from P_0 = I on
/// full matrices and returns -(1/2) ln det P_k.
double objective_matrix(const MeasurementInstance& inst, const ActionString& s);

/// (1/2) ln(S T).
double objective_closed_form(const MeasurementInstance& inst,
                             const ActionString& s);

class MeasurementObjective final : public ObjectiveOracle {
 public:
  enum class Path { kClosedForm, kMatrix };

  explicit MeasurementObjective(const MeasurementInstance& inst,
                                Path path = Path::kClosedForm)
      : inst_(inst), path_(path) {}

  std::size_t horizon() const override { return inst_.K(); }
  std::size_t alphabet_size() const override { return inst_.grid_size(); }
  double evaluate(const ActionString& s) const override {
    return path_ == Path::kMatrix ? objective_matrix(inst_, s)
                                  : objective_closed_form(inst_, s);
  }

 private:
  const MeasurementInstance& inst_;
  Path path_;
};

/// sigma_{i+1}^2 >= sigma_i^2 for i = 1..K-1.
struct SigmaCondition {
  std::vector<double> margins;  // sigma_{i+1}^2 - sigma_i^2
  double worst_margin = 0.0;    // +infinity when K = 1
  bool holds = true;
};

SigmaCondition check_sigma_condition(const MeasurementInstance& inst);

/// b^-2 / (a^-2 - b^-2) >= ((2K-2)^2 / 4)(a^-2 + b^-2) + 1, where [a, b]
/// contains every sigma_i. a == b is reported as satisfied with infinite lhs.
struct PriorCondition {
  double a = 0.0;
  double b = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
  bool degenerate = false;
};

PriorCondition check_prior_condition(std::size_t K, double a, double b);
// Validates that every sigma_i lies in [a, b].
PriorCondition check_prior_condition(const MeasurementInstance& inst, double a,
                                     double b);
// Uses the tightest interval, a = min sigma_i and b = max sigma_i.
PriorCondition check_prior_condition(const MeasurementInstance& inst);

struct FirstStageCheck {
  double e1 = 0.0;       // greedy
  double e1_star = 0.0;  // optimal
  double gap = 0.0;      // |e1 - e1_star|
  bool equal = false;
  // (e1 - e1*)(1 - (e1 + e1*)), nonnegative whenever greedy is correct.
  double stage1_product = 0.0;
};

FirstStageCheck verify_g1_equals_o1(const MeasurementInstance& inst,
                                    const OptimalResult& optimal,
                                    const GreedyTrace& greedy);

/// Both sides of the GO-concavity inequality at stage i rewritten in the
/// precision sums (exponentiated form):
///
///   (S*_i + S̄*)^{K-i} (c_K - (S*_i + S̄*))^{K-i} S_i^i (a_i - S_i)^i
///     <= (S_i + S̄*)^K (c_K - (S_i + S̄*))^K
struct GoInequalityTerms {
  std::size_t stage = 0;
  double s_star_i = 0.0;    // 1 + sum_{j<=i} e*_j / sigma_j^2
  double s_bar_star = 0.0;  // sum_{j>i} e*_j / sigma_j^2
  double s_i = 0.0;         // 1 + sum_{j<=i} e_j / sigma_j^2
  double a_i = 0.0;         // 2 + sum_{j<=i} 1 / sigma_j^2
  double c_k = 0.0;         // 2 + sum_{j<=K} 1 / sigma_j^2
  double lhs = 0.0;
  double rhs = 0.0;
  // (lhs - rhs) / max(lhs, rhs)
  double relative_gap = 0.0;
  // lhs <= rhs within the relative tolerance.
  bool holds = false;
};

GoInequalityTerms go_inequality_terms(const MeasurementInstance& inst,
                                      const GreedyTrace& greedy,
                                      const OptimalResult& optimal,
                                      std::size_t i, double rel_tol = 1e-9);

enum class SigmaOrder { kNonDecreasing, kNonIncreasing, kUnordered };

/// sigma_j^2 uniform in [lo, hi], then sorted according to `order`.
MeasurementInstance random_instance(std::uint64_t seed, std::size_t K,
                                    std::size_t grid_points, SigmaOrder order,
                                    double lo = 0.25, double hi = 4.0);

}  // namespace strsub::measurement
