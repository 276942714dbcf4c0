#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cycavoid/permutation.hpp"

namespace cycavoid {

/// Real weights on consecutive patterns.
///
/// `wt` is defined on every pattern of length `window` = m + 1, the
/// boundary weights `wt1` (initial) and `wt2` (final) on every pattern of
/// length m. Tables are dense and indexed by `pattern_rank`. A forbidden
/// pattern set is the special case of 0/1 weights with unit boundaries.
class WeightScheme {
 public:
  /// Largest supported window; (window)! table entries are materialized.
  static constexpr int kMaxWindow = 10;

  /// Every window weight equal to `fill`, boundary weights 1.
  WeightScheme(int window, double fill);

  static WeightScheme from_forbidden_set(int window, std::span<const Permutation> forbidden);
  /// Patterns given as words; the window is their common length.
  static WeightScheme from_forbidden_words(std::span<const std::string> words);
  /// wt(123) = 0, wt(321) = 2, every other pattern of S_3 weight 1. Its
  /// cyclic sum over S_n is the sum of 2^(cyclic double descents) over the
  /// cyclically 123-avoiding permutations.
  static WeightScheme double_descent_weighted();

  /// Parses {"window": 3, "wt": {"321": 2, "123": 0}, "default": 1} with
  /// optional "wt1"/"wt2" maps (unlisted boundary patterns weigh 1).
  static WeightScheme from_json(std::string_view text);
  std::string to_json() const;

  int window() const noexcept { return window_; }
  int arity() const noexcept { return window_ - 1; }

  double wt(std::uint64_t rank) const noexcept { return wt_[rank]; }
  double wt1(std::uint64_t rank) const noexcept { return wt1_[rank]; }
  double wt2(std::uint64_t rank) const noexcept { return wt2_[rank]; }
  double wt(const Permutation& pattern) const;
  double wt1(const Permutation& pattern) const;
  double wt2(const Permutation& pattern) const;

  std::span<const double> wt_table() const noexcept { return wt_; }
  std::span<const double> wt1_table() const noexcept { return wt1_; }
  std::span<const double> wt2_table() const noexcept { return wt2_; }

  void set_wt(const Permutation& pattern, double value);
  void set_wt1(const Permutation& pattern, double value);
  void set_wt2(const Permutation& pattern, double value);

  /// True when every weight in all three tables is an integer that fits
  /// comfortably in 32 bits.
  bool is_integral() const noexcept;
  bool is_nonnegative() const noexcept;
  bool has_unit_boundaries() const noexcept;

  /// Stable 64-bit identifier (FNV-1a over the canonical JSON), as 16 hex digits.
  std::string digest() const;

  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  void check_pattern(const Permutation& pattern, int length) const;

  int window_;
  std::vector<double> wt_;
  std::vector<double> wt1_;
  std::vector<double> wt2_;
  std::string label_;
};

/// Splits "123,321" into words and validates each as a permutation.
std::vector<std::string> split_pattern_list(std::string_view list);

}  // namespace cycavoid
