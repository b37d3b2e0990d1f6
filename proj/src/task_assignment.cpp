#include "strsub/task_assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace strsub::task {

namespace {

std::string where(std::size_t i, std::size_t a) {
  return "[" + std::to_string(i) + "][" + std::to_string(a) + "]";
}

}  // namespace

TaskAssignmentInstance::TaskAssignmentInstance(std::size_t n, std::size_t m,
                                               std::size_t K,
                                               std::vector<double> p,
                                               std::vector<double> lower,
                                               std::vector<double> upper)
    : n_(n),
      m_(m),
      K_(K),
      p_(std::move(p)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  if (n_ == 0 || m_ == 0 || K_ == 0)
    throw std::invalid_argument("n, m and K must be positive");
  if (p_.size() != n_ * K_ * m_)
    throw std::invalid_argument("p table has " + std::to_string(p_.size()) +
                                " entries, expected n*K*m = " +
                                std::to_string(n_ * K_ * m_));
  if (lower_.size() != n_ * m_ || upper_.size() != n_ * m_)
    throw std::invalid_argument("L and U must have n*m entries");

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t a = 0; a < m_; ++a) {
      const double lo = this->lower(i, a);
      const double hi = this->upper(i, a);
      if (!(lo > 0.0 && lo <= hi && hi < 1.0))
        throw std::invalid_argument("need 0 < L <= U < 1 at " + where(i, a));
      for (std::size_t j = 0; j < K_; ++j) {
        const double v = this->p(i, j, a);
        if (!(v >= lo && v <= hi))
          throw std::invalid_argument(
              "p[" + std::to_string(i) + "][" + std::to_string(j) + "][" +
              std::to_string(a) + "] = " + std::to_string(v) +
              " lies outside [L, U]");
      }
    }
  }
}

TaskAssignmentInstance constant_instance(const std::vector<double>& probs,
                                         std::size_t K) {
  const std::size_t m = probs.size();
  std::vector<double> p;
  p.reserve(K * m);
  for (std::size_t j = 0; j < K; ++j) p.insert(p.end(), probs.begin(), probs.end());
  return TaskAssignmentInstance(1, m, K, std::move(p), probs, probs);
}

double objective(const TaskAssignmentInstance& inst, const ActionString& s) {
  if (s.length() > inst.K())
    throw std::out_of_range("string exceeds horizon");
  if (s.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    double miss = 1.0;
    for (std::size_t j = 0; j < s.length(); ++j)
      miss *= 1.0 - inst.p(i, j, s[j].index);
    total += 1.0 - miss;
  }
  return total / static_cast<double>(inst.n());
}

DiminishingCondition check_diminishing_condition(
    const TaskAssignmentInstance& inst) {
  DiminishingCondition out;
  out.l_hat = *std::min_element(inst.lower_table().begin(),
                                inst.lower_table().end());
  out.u_hat = *std::max_element(inst.upper_table().begin(),
                                inst.upper_table().end());
  out.margin = out.l_hat - (1.0 - out.l_hat) * out.u_hat;
  out.holds = out.margin >= 0.0;
  out.extrapolated = inst.n() > 1;
  return out;
}

HalfCondition check_half_condition(const TaskAssignmentInstance& inst) {
  HalfCondition out;
  out.l_hat = *std::min_element(inst.lower_table().begin(),
                                inst.lower_table().end());
  out.margin = out.l_hat - 0.5;
  out.holds = out.margin >= 0.0;
  out.extrapolated = inst.n() > 1;
  return out;
}

PriorCondition check_prior_condition(const TaskAssignmentInstance& inst,
                                     double greedy_first_value) {
  if (inst.n() != 1) throw std::invalid_argument("n must be 1");
  PriorCondition out;
  out.c = 1.0;
  for (std::size_t a = 0; a < inst.m(); ++a) {
    const double ratio = (1.0 - inst.upper(0, a)) / (1.0 - inst.lower(0, a));
    out.c = a == 0 ? ratio : std::min(out.c, ratio);
  }
  out.threshold = 1.0 - std::pow(out.c, static_cast<double>(inst.K()));
  out.first_value = greedy_first_value;
  out.margin = greedy_first_value - out.threshold;
  out.holds = out.margin >= 0.0;
  return out;
}

GoCondition check_go_condition(const TaskAssignmentInstance& inst,
                               const OptimalResult& optimal, GoIndex index) {
  if (inst.n() != 1) throw std::invalid_argument("n must be 1");
  const std::size_t K = inst.K();
  const ActionString& o = optimal.argmax;
  if (o.length() != K)
    throw std::invalid_argument("optimal string shorter than K");

  GoCondition out;
  out.index = index;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < K; ++i) {
    double product = 1.0;
    // Stages j = i+1..K are zero-based i..K-1; o_i is o[i-1].
    for (std::size_t j = i; j < K; ++j) {
      const std::size_t agent =
          index == GoIndex::kOi ? o[i - 1].index : o[j].index;
      product *= 1.0 - inst.p(0, j, agent);
    }
    const double margin =
        static_cast<double>(i) / static_cast<double>(K) - product;
    out.products.push_back(product);
    out.margins.push_back(margin);
    out.worst_margin = std::min(out.worst_margin, margin);
  }
  out.holds = out.worst_margin >= 0.0;
  return out;
}

TaskAssignmentInstance random_instance(std::uint64_t seed, std::size_t n,
                                       std::size_t m, std::size_t K,
                                       double p_low, double p_high) {
  if (!(p_low > 0.0 && p_low <= p_high && p_high < 1.0))
    throw std::invalid_argument("need 0 < p_low <= p_high < 1");
  std::mt19937_64 rng(seed);
  // 53-bit uniform in [0, 1); fixed conversion keeps instances identical
  // across standard library implementations.
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<double> p(n * K * m);
  for (double& v : p)
    v = std::min(p_high, p_low + (p_high - p_low) * uniform());
  return TaskAssignmentInstance(n, m, K, std::move(p),
                                std::vector<double>(n * m, p_low),
                                std::vector<double>(n * m, p_high));
}

}  // namespace strsub::task
