#include "strsub/core.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace strsub {

ActionString::ActionString(std::initializer_list<std::size_t> indices) {
  actions_.reserve(indices.size());
  for (std::size_t i : indices) actions_.emplace_back(i);
}

ActionString ActionString::prefix(std::size_t len) const {
  len = std::min(len, actions_.size());
  return ActionString(std::vector<ActionId>(actions_.begin(),
                                            actions_.begin() + len));
}

ActionString ActionString::suffix_from(std::size_t pos) const {
  pos = std::min(pos, actions_.size());
  return ActionString(std::vector<ActionId>(actions_.begin() + pos,
                                            actions_.end()));
}

ActionString ActionString::appended(ActionId a) const {
  std::vector<ActionId> out;
  out.reserve(actions_.size() + 1);
  out.assign(actions_.begin(), actions_.end());
  out.push_back(a);
  return ActionString(std::move(out));
}

std::string ActionString::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(actions_[i].index);
  }
  out += ')';
  return out;
}

std::vector<std::size_t> ActionString::indices() const {
  std::vector<std::size_t> out;
  out.reserve(actions_.size());
  for (ActionId a : actions_) out.push_back(a.index);
  return out;
}

ActionString concat(const ActionString& m, const ActionString& n) {
  std::vector<ActionId> out;
  out.reserve(m.length() + n.length());
  out.insert(out.end(), m.begin(), m.end());
  out.insert(out.end(), n.begin(), n.end());
  return ActionString(std::move(out));
}

bool is_prefix(const ActionString& m, const ActionString& n) {
  if (m.length() > n.length()) return false;
  return std::equal(m.begin(), m.end(), n.begin());
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return (b > kSaturated - a) ? kSaturated : a + b;
}

}  // namespace

std::uint64_t count_strings(std::size_t alphabet_size, std::size_t min_len,
                            std::size_t max_len) {
  if (min_len > max_len) return 0;
  std::uint64_t total = 0;
  std::uint64_t power = 1;
  for (std::size_t k = 0; k <= max_len; ++k) {
    if (k >= min_len) total = saturating_add(total, power);
    power = saturating_mul(power, alphabet_size);
  }
  return total;
}

ActionString string_at(std::size_t alphabet_size, std::size_t min_len,
                       std::uint64_t rank) {
  if (alphabet_size == 0) throw std::invalid_argument("empty alphabet");
  std::size_t len = min_len;
  std::uint64_t block = count_strings(alphabet_size, len, len);
  while (rank >= block) {
    rank -= block;
    ++len;
    block = count_strings(alphabet_size, len, len);
  }
  std::vector<ActionId> out(len);
  for (std::size_t pos = len; pos-- > 0;) {
    out[pos] = ActionId(static_cast<std::size_t>(rank % alphabet_size));
    rank /= alphabet_size;
  }
  return ActionString(std::move(out));
}

std::uint64_t rank_of(std::size_t alphabet_size, std::size_t min_len,
                      const ActionString& s) {
  if (s.length() < min_len) throw std::invalid_argument("string too short");
  std::uint64_t rank =
      s.length() == min_len ? 0 : count_strings(alphabet_size, min_len,
                                                s.length() - 1);
  std::uint64_t within = 0;
  for (ActionId a : s) within = within * alphabet_size + a.index;
  return rank + within;
}

StringEnumerator::StringEnumerator(std::size_t alphabet_size,
                                   std::size_t min_len, std::size_t max_len)
    : alphabet_size_(alphabet_size), max_len_(max_len), digits_(min_len, 0) {
  if (alphabet_size == 0) throw std::invalid_argument("empty alphabet");
  if (min_len > max_len) throw std::invalid_argument("min_len > max_len");
}

std::optional<ActionString> StringEnumerator::next() {
  if (done_) return std::nullopt;
  if (started_) {
    // Odometer increment; on overflow move to the next length.
    std::size_t pos = digits_.size();
    while (pos > 0) {
      --pos;
      if (++digits_[pos] < alphabet_size_) break;
      digits_[pos] = 0;
      if (pos == 0) {
        if (digits_.size() == max_len_) {
          done_ = true;
          return std::nullopt;
        }
        digits_.assign(digits_.size() + 1, 0);
      }
    }
    if (digits_.empty()) {
      // The empty string was just emitted.
      if (max_len_ == 0) {
        done_ = true;
        return std::nullopt;
      }
      digits_.assign(1, 0);
    }
  }
  started_ = true;
  std::vector<ActionId> out;
  out.reserve(digits_.size());
  for (std::size_t d : digits_) out.emplace_back(d);
  return ActionString(std::move(out));
}

}  // namespace strsub
