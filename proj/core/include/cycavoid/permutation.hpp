#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cycavoid {

/// A bijection on {1, ..., n}, stored in one-line notation.
///
/// Construction validates the bijection; every Permutation in circulation
/// is therefore well formed and non-empty.
class Permutation {
 public:
  explicit Permutation(std::vector<int> entries);
  Permutation(std::initializer_list<int> entries)
      : Permutation(std::vector<int>(entries)) {}

  static Permutation identity(int n);

  /// Parses a one-line word such as "2413". Letters continue the digits,
  /// so "a" is 10 and "k" is 20.
  static Permutation parse(std::string_view word);

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  /// 1-based access, `at(1)` is the first entry.
  int at(int position) const { return entries_.at(position - 1); }
  std::span<const int> entries() const noexcept { return entries_; }

  std::string word() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> entries_;
};

/// Standardization of a real vector. Equal coordinates are ranked by
/// position, the earlier one receiving the smaller value.
Permutation standardize(std::span<const double> point);
Permutation standardize(std::span<const int> values);

/// The n windows of length `window` read cyclically from each position.
std::vector<Permutation> cyclic_windows(const Permutation& pi, int window);

Permutation rotate(const Permutation& pi, int shift);
/// pi_i -> n + 1 - pi_i
Permutation complement(const Permutation& pi);

/// Lexicographic rank of a pattern in S_k (identity is 0), computed through
/// the Lehmer code. Valid for k <= 20.
std::uint64_t pattern_rank(const Permutation& pattern);
Permutation pattern_unrank(std::uint64_t rank, int k);

/// Rank of the standardization of `values` without materializing it.
/// Ties follow the same positional rule as `standardize`.
template <typename T>
std::uint64_t window_rank(std::span<const T> values) noexcept {
  const auto k = values.size();
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t j = i + 1; j < k; ++j) smaller_after += values[j] < values[i];
    rank = rank * (k - i) + smaller_after;
  }
  return rank;
}

std::uint64_t factorial(int n);

}  // namespace cycavoid
