#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cycavoid/permutation.hpp"
#include "cycavoid/weight_scheme.hpp"

namespace cycavoid {

using int128 = __int128;

std::string to_string(int128 value);

enum class Mode { Linear, Cyclic };
std::string_view to_string(Mode mode) noexcept;

/// Sum of linear (alpha) or cyclic (beta) weights over S_n.
///
/// Integral schemes are accumulated exactly in 128-bit integers and
/// `exact` is set; otherwise `integer` is unused and `real` carries a
/// compensated floating sum.
struct EnumerationResult {
  int n = 0;
  Mode mode = Mode::Linear;
  std::string scheme_digest;
  bool exact = false;
  int128 integer = 0;
  double real = 0.0;

  double value() const noexcept { return exact ? static_cast<double>(integer) : real; }
};

struct EnumerationOptions {
  int n_max = 11;
  /// 0 picks `default_thread_count()`.
  int threads = 0;
};

/// CYCAVOID_THREADS if set and positive, otherwise the hardware concurrency.
int default_thread_count();

EnumerationResult alpha_bruteforce(int n, const WeightScheme& scheme,
                                   const EnumerationOptions& options = {});
EnumerationResult beta_bruteforce(int n, const WeightScheme& scheme,
                                  const EnumerationOptions& options = {});

/// Sum of 2^(cyclic double descents) over the cyclically 123-avoiding
/// permutations of S_n. Equals n! for every n >= 3.
int128 weighted_cyclic_123_sum(int n, const EnumerationOptions& options = {});

struct CorollaryTerm {
  Permutation pi;
  int double_descents;
};

/// Permutations with pi_1 = n, no linear double ascent and a final descent,
/// in lexicographic order, each with its linear double-descent count.
std::vector<CorollaryTerm> corollary_terms(int n, const EnumerationOptions& options = {});
/// Sum of 2^bb over `corollary_terms(n)`; equals (n-1)!.
int128 corollary_count(int n, const EnumerationOptions& options = {});

enum class AlternatingShape {
  UpDown,          // pi_1 < pi_2 > pi_3 < ...
  DownUp,          // pi_1 > pi_2 < pi_3 > ...
  EndsWithAscent,  // ... > pi_{n-1} < pi_n
};

/// Number of alternating permutations of the given shape (E_n).
std::uint64_t alternating_count(int n, AlternatingShape shape,
                                const EnumerationOptions& options = {});

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of beta_n / n!: the mean over uniform points of
/// [0,1]^n of the product of wt over the n cyclic windows. The sample
/// stream is split into fixed chunks with derived seeds, so the estimate
/// depends only on (n, scheme, samples, seed) and not on `threads`.
MCEstimate beta_montecarlo(int n, const WeightScheme& scheme, std::int64_t samples,
                           std::uint64_t seed, int threads = 0);

}  // namespace cycavoid
