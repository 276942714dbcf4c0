#pragma once

#include <cstdint>
#include <vector>

namespace cycavoid {

/// A truncated infinite series together with a proven bound on the
/// discarded tail. `converged` is false when the term cap was reached
/// before `tail_bound` dropped below the requested tolerance.
struct SeriesValue {
  int n = 0;
  double value = 0.0;
  std::int64_t terms_used = 0;
  double tail_bound = 0.0;
  bool converged = false;
};

struct SeriesOptions {
  /// Largest truncation index K; the sum covers |k| <= K.
  std::int64_t max_k = 1'000'000;
};

/// sqrt(3) / (2 pi (k + 1/3)), the spectrum of the 123-avoidance operator.
double eigenvalue_123(std::int64_t k) noexcept;
/// eigenvalue_123(k) for k in [lo, hi].
std::vector<double> eigenvalues_123(std::int64_t lo, std::int64_t hi);

/// n! * sum over all integers k of eigenvalue_123(k)^n, the number of
/// cyclically 123-avoiding permutations of length n. The tail beyond
/// |k| > K is bounded by 2 c^n (K - 2/3)^(1-n) / (n-1), c = sqrt(3)/(2 pi),
/// and K is chosen so that n! times that bound is at most `tol`.
SeriesValue series_beta_123(int n, double tol, const SeriesOptions& options = {});

/// E_n = n! * 2 * (2/pi)^(n+1) * sum over k of (4k+1)^-(n+1).
SeriesValue euler_series(int n, double tol, const SeriesOptions& options = {});

}  // namespace cycavoid
