#include "strsub/adaptive_measurement.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace strsub::measurement {

MeasurementInstance::MeasurementInstance(std::vector<double> sigma_sq,
                                         std::vector<double> e_grid)
    : sigma_sq_(std::move(sigma_sq)), e_grid_(std::move(e_grid)) {
  if (sigma_sq_.empty()) throw std::invalid_argument("sigma_sq is empty");
  if (e_grid_.empty()) throw std::invalid_argument("e_grid is empty");
  for (std::size_t j = 0; j < sigma_sq_.size(); ++j)
    if (!(sigma_sq_[j] > 0.0) || !std::isfinite(sigma_sq_[j]))
      throw std::invalid_argument("sigma_sq[" + std::to_string(j) +
                                  "] must be positive");
  for (std::size_t k = 0; k < e_grid_.size(); ++k) {
    const double e = e_grid_[k];
    if (!(e >= kGridMin && e <= kGridMax))
      throw std::invalid_argument("e_grid[" + std::to_string(k) +
                                  "] lies outside [0.5, 1]");
    if (k > 0 && !(e > e_grid_[k - 1]))
      throw std::invalid_argument("e_grid must be strictly increasing");
  }
}

std::vector<double> uniform_grid(std::size_t count, double lo, double hi) {
  if (count == 0) throw std::invalid_argument("grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;
  return grid;
}

PosteriorState accumulate(const MeasurementInstance& inst,
                          const ActionString& s) {
  if (s.length() > inst.K()) throw std::out_of_range("string exceeds horizon");
  PosteriorState state;
  for (std::size_t j = 0; j < s.length(); ++j) {
    const double e = inst.e(s[j]);
    state.s += e / inst.sigma_sq(j);
    state.t += (1.0 - e) / inst.sigma_sq(j);
  }
  return state;
}

double objective_matrix(const MeasurementInstance& inst,
                        const ActionString& s) {
  if (s.length() > inst.K()) throw std::out_of_range("string exceeds horizon");
  using Eigen::MatrixXd;
  MatrixXd cov = MatrixXd::Identity(kDim, kDim);
  for (std::size_t j = 0; j < s.length(); ++j) {
    const double e = inst.e(s[j]);
    MatrixXd a = MatrixXd::Zero(kDim, kDim);
    a(0, 0) = std::sqrt(e);
    a(1, 1) = std::sqrt(1.0 - e);
    const MatrixXd precision =
        cov.inverse() + (a.transpose() * a) / inst.sigma_sq(j);
    cov = precision.inverse();
  }
  const Eigen::LLT<MatrixXd> llt(cov);
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  double log_det = 0.0;
  for (Eigen::Index k = 0; k < diag.size(); ++k) log_det += 2.0 * std::log(diag(k));
  return -0.5 * log_det;
}

double objective_closed_form(const MeasurementInstance& inst,
                             const ActionString& s) {
  const PosteriorState state = accumulate(inst, s);
  return 0.5 * std::log(state.s * state.t);
}

SigmaCondition check_sigma_condition(const MeasurementInstance& inst) {
  SigmaCondition out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < inst.K(); ++i) {
    const double margin = inst.sigma_sq(i + 1) - inst.sigma_sq(i);
    out.margins.push_back(margin);
    out.worst_margin = std::min(out.worst_margin, margin);
  }
  out.holds = out.worst_margin >= 0.0;
  return out;
}

PriorCondition check_prior_condition(std::size_t K, double a, double b) {
  if (!(a > 0.0 && a <= b))
    throw std::invalid_argument("need 0 < a <= b");
  PriorCondition out;
  out.a = a;
  out.b = b;
  const double ia = 1.0 / (a * a);
  const double ib = 1.0 / (b * b);
  const double spread = 2.0 * static_cast<double>(K) - 2.0;
  out.rhs = spread * spread / 4.0 * (ia + ib) + 1.0;
  if (a == b) {
    out.degenerate = true;
    out.lhs = std::numeric_limits<double>::infinity();
    out.margin = std::numeric_limits<double>::infinity();
    out.holds = true;
    return out;
  }
  out.lhs = ib / (ia - ib);
  out.margin = out.lhs - out.rhs;
  out.holds = out.margin >= 0.0;
  return out;
}

PriorCondition check_prior_condition(const MeasurementInstance& inst, double a,
                                     double b) {
  for (std::size_t j = 0; j < inst.K(); ++j) {
    const double sigma = std::sqrt(inst.sigma_sq(j));
    if (sigma < a || sigma > b)
      throw std::invalid_argument("sigma_" + std::to_string(j + 1) +
                                  " lies outside [a, b]");
  }
  return check_prior_condition(inst.K(), a, b);
}

PriorCondition check_prior_condition(const MeasurementInstance& inst) {
  const auto [lo, hi] =
      std::minmax_element(inst.sigma_sq().begin(), inst.sigma_sq().end());
  return check_prior_condition(inst.K(), std::sqrt(*lo), std::sqrt(*hi));
}

FirstStageCheck verify_g1_equals_o1(const MeasurementInstance& inst,
                                    const OptimalResult& optimal,
                                    const GreedyTrace& greedy) {
  if (greedy.horizon() == 0 || optimal.argmax.empty())
    throw std::invalid_argument("need non-empty greedy and optimal strings");
  FirstStageCheck out;
  out.e1 = inst.e(greedy.prefix(1)[0]);
  out.e1_star = inst.e(optimal.argmax[0]);
  out.gap = std::abs(out.e1 - out.e1_star);
  out.equal = out.e1 == out.e1_star;
  out.stage1_product = (out.e1 - out.e1_star) * (1.0 - (out.e1 + out.e1_star));
  return out;
}

GoInequalityTerms go_inequality_terms(const MeasurementInstance& inst,
                                      const GreedyTrace& greedy,
                                      const OptimalResult& optimal,
                                      std::size_t i, double rel_tol) {
  const std::size_t K = inst.K();
  if (i < 1 || i >= K)
    throw std::out_of_range("stage i must satisfy 1 <= i <= K-1");
  if (optimal.argmax.length() != K)
    throw std::invalid_argument("optimal string shorter than K");
  if (greedy.horizon() < i)
    throw std::invalid_argument("greedy trace shorter than i");

  const ActionString& g = greedy.prefix(i);
  const ActionString& o = optimal.argmax;

  GoInequalityTerms t;
  t.stage = i;
  t.s_star_i = 1.0;
  t.s_i = 1.0;
  t.a_i = 2.0;
  t.c_k = 2.0;
  for (std::size_t j = 0; j < K; ++j) {
    const double w = 1.0 / inst.sigma_sq(j);
    t.c_k += w;
    if (j < i) {
      t.s_star_i += w * inst.e(o[j]);
      t.s_i += w * inst.e(g[j]);
      t.a_i += w;
    } else {
      t.s_bar_star += w * inst.e(o[j]);
    }
  }

  const double opt_sum = t.s_star_i + t.s_bar_star;
  const double splice_sum = t.s_i + t.s_bar_star;
  const double rest = static_cast<double>(K - i);
  const double done = static_cast<double>(i);
  t.lhs = std::pow(opt_sum, rest) * std::pow(t.c_k - opt_sum, rest) *
          std::pow(t.s_i, done) * std::pow(t.a_i - t.s_i, done);
  t.rhs = std::pow(splice_sum, static_cast<double>(K)) *
          std::pow(t.c_k - splice_sum, static_cast<double>(K));
  t.relative_gap = (t.lhs - t.rhs) / std::max(t.lhs, t.rhs);
  t.holds = t.relative_gap <= rel_tol;
  return t;
}

MeasurementInstance random_instance(std::uint64_t seed, std::size_t K,
                                    std::size_t grid_points, SigmaOrder order,
                                    double lo, double hi) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (!(lo > 0.0 && lo <= hi))
    throw std::invalid_argument("need 0 < lo <= hi");
  std::mt19937_64 rng(seed);
  std::vector<double> sigma_sq(K);
  for (double& v : sigma_sq)
    v = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  if (order == SigmaOrder::kNonDecreasing)
    std::sort(sigma_sq.begin(), sigma_sq.end());
  else if (order == SigmaOrder::kNonIncreasing)
    std::sort(sigma_sq.begin(), sigma_sq.end(), std::greater<>());
  return MeasurementInstance(std::move(sigma_sq), uniform_grid(grid_points));
}

}  // namespace strsub::measurement
