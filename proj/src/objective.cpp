#include "strsub/objective.hpp"

namespace strsub {

InstanceTooLarge::InstanceTooLarge(std::uint64_t required,
                                   std::uint64_t budget)
    : std::runtime_error("instance too large: " + std::to_string(required) +
                         " evaluations exceed budget " +
                         std::to_string(budget) + "; shrink m or K"),
      required_(required),
      budget_(budget) {}

void require_within_budget(std::size_t alphabet_size, std::size_t horizon,
                           std::uint64_t budget) {
  const std::uint64_t required = count_strings(alphabet_size, 1, horizon);
  if (required > budget) throw InstanceTooLarge(required, budget);
}

FunctionOracle::FunctionOracle(std::size_t alphabet_size, std::size_t horizon,
                               Fn fn)
    : alphabet_size_(alphabet_size), horizon_(horizon), fn_(std::move(fn)) {
  if (alphabet_size_ == 0) throw std::invalid_argument("empty alphabet");
  if (horizon_ == 0) throw std::invalid_argument("horizon must be positive");
}

double FunctionOracle::evaluate(const ActionString& s) const {
  if (s.empty()) return 0.0;
  if (s.length() > horizon_) throw std::out_of_range("string exceeds horizon");
  return fn_(s);
}

TableOracle::TableOracle(std::size_t alphabet_size, std::size_t horizon,
                         std::map<ActionString, double> values)
    : alphabet_size_(alphabet_size),
      horizon_(horizon),
      values_(std::move(values)) {
  if (alphabet_size_ == 0) throw std::invalid_argument("empty alphabet");
  if (horizon_ == 0) throw std::invalid_argument("horizon must be positive");
  for (const auto& [s, v] : values_) {
    if (s.length() > horizon_)
      throw std::invalid_argument("table entry " + s.to_string() +
                                  " exceeds horizon");
    for (ActionId a : s)
      if (a.index >= alphabet_size_)
        throw std::invalid_argument("table entry " + s.to_string() +
                                    " uses an action outside the alphabet");
    if (s.empty() && v != 0.0)
      throw std::invalid_argument("table entry () must be 0");
  }
  for_each_string(alphabet_size_, 1, horizon_, [&](const ActionString& s) {
    if (!values_.contains(s))
      throw std::invalid_argument("table is missing entry " + s.to_string());
  });
}

double TableOracle::evaluate(const ActionString& s) const {
  if (s.empty()) return 0.0;
  auto it = values_.find(s);
  if (it == values_.end())
    throw std::out_of_range("no table entry for " + s.to_string());
  return it->second;
}

}  // namespace strsub
