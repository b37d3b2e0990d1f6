#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "strsub/core.hpp"

namespace strsub {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;
inline constexpr double kDefaultTol = 1e-9;

/// Raised when an exhaustive enumeration would exceed the evaluation budget.
class InstanceTooLarge : public std::runtime_error {
 public:
  InstanceTooLarge(std::uint64_t required, std::uint64_t budget);

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

struct SolverOptions {
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

// Throws InstanceTooLarge when sum_{k=1..K} m^k exceeds the budget.
void require_within_budget(std::size_t alphabet_size, std::size_t horizon,
                           std::uint64_t budget);

/// Evaluation contract shared by every solver and checker.
///
/// evaluate() must return 0 for the empty string, must be deterministic, and
/// must be safe to call concurrently. Strings longer than horizon() are
/// rejected by implementations.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual std::size_t horizon() const = 0;
  virtual std::size_t alphabet_size() const = 0;
  virtual double evaluate(const ActionString& s) const = 0;

  double operator()(const ActionString& s) const { return evaluate(s); }
};

/// Wraps a callable; used for synthetic objectives.
class FunctionOracle final : public ObjectiveOracle {
 public:
  using Fn = std::function<double(const ActionString&)>;

  FunctionOracle(std::size_t alphabet_size, std::size_t horizon, Fn fn);

  std::size_t horizon() const override { return horizon_; }
  std::size_t alphabet_size() const override { return alphabet_size_; }
  double evaluate(const ActionString& s) const override;

 private:
  std::size_t alphabet_size_;
  std::size_t horizon_;
  Fn fn_;
};

/// Explicit string -> value table. Every string of length 1..K must be
/// present; the empty string is implicitly 0.
class TableOracle final : public ObjectiveOracle {
 public:
  TableOracle(std::size_t alphabet_size, std::size_t horizon,
              std::map<ActionString, double> values);

  std::size_t horizon() const override { return horizon_; }
  std::size_t alphabet_size() const override { return alphabet_size_; }
  double evaluate(const ActionString& s) const override;

  const std::map<ActionString, double>& values() const { return values_; }

 private:
  std::size_t alphabet_size_;
  std::size_t horizon_;
  std::map<ActionString, double> values_;
};

/// Forwards to another oracle and counts calls.
class CountingOracle final : public ObjectiveOracle {
 public:
  explicit CountingOracle(const ObjectiveOracle& inner) : inner_(inner) {}

  std::size_t horizon() const override { return inner_.horizon(); }
  std::size_t alphabet_size() const override { return inner_.alphabet_size(); }
  double evaluate(const ActionString& s) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.evaluate(s);
  }

  std::uint64_t calls() const { return calls_.load(); }
  void reset() { calls_.store(0); }

 private:
  const ObjectiveOracle& inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

}  // namespace strsub
