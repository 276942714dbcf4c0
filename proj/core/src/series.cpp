#include "cycavoid/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cycavoid/error.hpp"

namespace cycavoid {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
const long double kC123 = std::sqrt(3.0L) / (2.0L * kPi);

struct Compensated {
  long double sum = 0.0L;
  long double carry = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  long double total() const { return sum + carry; }
};

long double power(long double base, int n) {
  long double r = 1.0L;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::OutOfDomain, "tolerance must be positive");
}

// Smallest K >= 1 with base^(1/exponent) <= K * scale + shift, capped.
std::int64_t truncation(long double log_needed, int exponent, long double scale, long double shift,
                        std::int64_t cap) {
  const long double root = std::exp(log_needed / exponent);
  const long double k = std::ceil((root - shift) / scale);
  if (!(k < static_cast<long double>(cap))) return cap;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
}

}  // namespace

double eigenvalue_123(std::int64_t k) noexcept {
  return static_cast<double>(kC123 / (static_cast<long double>(k) + 1.0L / 3.0L));
}

std::vector<double> eigenvalues_123(std::int64_t lo, std::int64_t hi) {
  std::vector<double> out;
  if (hi < lo) return out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (auto k = lo; k <= hi; ++k) out.push_back(eigenvalue_123(k));
  return out;
}

SeriesValue series_beta_123(int n, double tol, const SeriesOptions& options) {
  if (n < 2) throw Error(ErrorCode::OutOfDomain, "series_beta_123 needs n >= 2, got " + std::to_string(n));
  check_tol(tol);
  const long double log_fact = std::lgamma(static_cast<long double>(n) + 1.0L);

  // n! * 2 c^n (K - 2/3)^(1-n) / (n-1) <= tol
  const long double log_needed = std::log(2.0L) + n * std::log(kC123) + log_fact -
                                 std::log(static_cast<long double>(n - 1)) - std::log(static_cast<long double>(tol));
  const std::int64_t k_max = truncation(log_needed, n - 1, 1.0L, -2.0L / 3.0L, options.max_k);

  Compensated acc;
  auto term = [n](std::int64_t k) {
    return power(kC123 / (static_cast<long double>(k) + 1.0L / 3.0L), n);
  };
  for (std::int64_t j = 0; j < k_max; ++j) acc.add(term(j) + term(-(j + 1)));
  acc.add(term(k_max));

  const long double fact = std::exp(log_fact);
  SeriesValue out;
  out.n = n;
  out.value = static_cast<double>(fact * acc.total());
  out.terms_used = 2 * k_max + 1;
  out.tail_bound = static_cast<double>(
      fact * 2.0L * power(kC123, n) *
      std::pow(static_cast<long double>(k_max) - 2.0L / 3.0L, static_cast<long double>(1 - n)) /
      (n - 1));
  out.converged = out.tail_bound <= tol;
  return out;
}

SeriesValue euler_series(int n, double tol, const SeriesOptions& options) {
  if (n < 1) throw Error(ErrorCode::OutOfDomain, "euler_series needs n >= 1, got " + std::to_string(n));
  check_tol(tol);
  const long double log_fact = std::lgamma(static_cast<long double>(n) + 1.0L);
  const long double log_prefactor = log_fact + std::log(2.0L) + (n + 1) * std::log(2.0L / kPi);

  // prefactor * (4K - 1)^(-n) / (2n) <= tol
  const long double log_needed =
      log_prefactor - std::log(2.0L * n) - std::log(static_cast<long double>(tol));
  const std::int64_t k_max = truncation(log_needed, n, 4.0L, -1.0L, options.max_k);

  Compensated acc;
  auto term = [n](std::int64_t k) {
    return 1.0L / power(4.0L * static_cast<long double>(k) + 1.0L, n + 1);
  };
  for (std::int64_t j = 0; j < k_max; ++j) acc.add(term(j) + term(-(j + 1)));
  acc.add(term(k_max));

  const long double prefactor = std::exp(log_prefactor);
  SeriesValue out;
  out.n = n;
  out.value = static_cast<double>(prefactor * acc.total());
  out.terms_used = 2 * k_max + 1;
  out.tail_bound = static_cast<double>(
      prefactor * std::pow(4.0L * static_cast<long double>(k_max) - 1.0L, static_cast<long double>(-n)) /
      (2.0L * n));
  out.converged = out.tail_bound <= tol;
  return out;
}

}  // namespace cycavoid
