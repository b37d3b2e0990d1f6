#pragma once

// String algebra over a finite action alphabet.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace strsub {

/// Index of an action in the owning instance's action table.
struct ActionId {
  std::size_t index = 0;

  constexpr ActionId() = default;
  constexpr explicit ActionId(std::size_t i) : index(i) {}

  friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

/// Finite ordered sequence of actions. The empty string has length 0.
class ActionString {
 public:
  ActionString() = default;
  explicit ActionString(std::vector<ActionId> actions)
      : actions_(std::move(actions)) {}
  ActionString(std::initializer_list<std::size_t> indices);

  std::size_t length() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }

  ActionId operator[](std::size_t i) const { return actions_[i]; }
  ActionId back() const { return actions_.back(); }
  std::span<const ActionId> actions() const { return actions_; }
  auto begin() const { return actions_.begin(); }
  auto end() const { return actions_.end(); }

  // First `len` actions (len clamped to length()).
  ActionString prefix(std::size_t len) const;
  // Actions from position `pos` to the end.
  ActionString suffix_from(std::size_t pos) const;
  ActionString appended(ActionId a) const;

  // "(0,1,1)"; the empty string prints as "()".
  std::string to_string() const;
  std::vector<std::size_t> indices() const;

  friend bool operator==(const ActionString&, const ActionString&) = default;
  friend auto operator<=>(const ActionString&, const ActionString&) = default;

 private:
  std::vector<ActionId> actions_;
};

ActionString concat(const ActionString& m, const ActionString& n);

// True iff n = m ⊕ l for some l.
bool is_prefix(const ActionString& m, const ActionString& n);

/// Number of strings over an alphabet of size m with min_len <= length <=
/// max_len. Saturates at UINT64_MAX.
std::uint64_t count_strings(std::size_t alphabet_size, std::size_t min_len,
                            std::size_t max_len);

/// The string at position `rank` of the length-then-lexicographic order
/// restricted to lengths >= min_len. Inverse of rank_of().
ActionString string_at(std::size_t alphabet_size, std::size_t min_len,
                       std::uint64_t rank);

std::uint64_t rank_of(std::size_t alphabet_size, std::size_t min_len,
                      const ActionString& s);

/// Streams every string with min_len <= length <= max_len exactly once in
/// length-then-lexicographic order.
class StringEnumerator {
 public:
  StringEnumerator(std::size_t alphabet_size, std::size_t min_len,
                   std::size_t max_len);

  std::optional<ActionString> next();

 private:
  std::size_t alphabet_size_;
  std::size_t max_len_;
  std::vector<std::size_t> digits_;
  bool started_ = false;
  bool done_ = false;
};

template <class Fn>
void for_each_string(std::size_t alphabet_size, std::size_t min_len,
                     std::size_t max_len, Fn&& fn) {
  StringEnumerator e(alphabet_size, min_len, max_len);
  while (auto s = e.next()) fn(*s);
}

}  // namespace strsub
