#include "cycavoid/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "cycavoid/error.hpp"
#include "cycavoid/statistics.hpp"

namespace cycavoid {

std::string to_string(int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work in the negative range so the minimum value is representable.
  std::string digits;
  int128 v = negative ? value : -value;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::Linear ? "linear" : "cyclic";
}

int default_thread_count() {
  if (const char* env = std::getenv("CYCAVOID_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

struct IntAccumulator {
  int128 sum = 0;
  void add(int128 x) {
    if (__builtin_add_overflow(sum, x, &sum)) throw Error(ErrorCode::Overflow, "128-bit sum overflow");
  }
  void merge(const IntAccumulator& o) { add(o.sum); }
};

// Neumaier compensated summation.
struct RealAccumulator {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double total() const { return sum + carry; }
};

inline int128 multiply(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "128-bit weight product overflow");
  return r;
}
inline double multiply(double a, double b) { return a * b; }

template <typename W>
struct Accumulator;
template <>
struct Accumulator<int128> {
  using type = IntAccumulator;
};
template <>
struct Accumulator<double> {
  using type = RealAccumulator;
};

// Depth-first walk over permutations of 1..n in lexicographic order with a
// fixed first entry. `step(vals, len)` returns the weight factor completed
// by the prefix of length `len`; a zero factor prunes the subtree.
// `leaf(vals)` returns the factor applied once the permutation is complete.
template <typename W, typename Step, typename Leaf>
class PrefixWalker {
 public:
  PrefixWalker(int n, const Step& step, const Leaf& leaf) : n_(n), step_(step), leaf_(leaf) {}

  typename Accumulator<W>::type run(int first) {
    acc_ = {};
    vals_[0] = first;
    used_ = 1u << first;
    const W f = step_(vals_, 1);
    if (f != W(0)) descend(1, f);
    return acc_;
  }

 private:
  void descend(int depth, W prod) {
    if (depth == n_) {
      const W f = leaf_(vals_);
      if (f != W(0)) acc_.add(multiply(prod, f));
      return;
    }
    for (int v = 1; v <= n_; ++v) {
      if (used_ & (1u << v)) continue;
      vals_[depth] = v;
      used_ |= 1u << v;
      const W f = step_(vals_, depth + 1);
      if (f != W(0)) descend(depth + 1, multiply(prod, f));
      used_ &= ~(1u << v);
    }
  }

  int n_;
  const Step& step_;
  const Leaf& leaf_;
  int vals_[32] = {};
  std::uint32_t used_ = 0;
  typename Accumulator<W>::type acc_;
};

// Runs one walker per first entry, distributing shards over threads.
// Results are stored per shard so the reduction order never depends on
// scheduling.
template <typename W, typename Step, typename Leaf>
std::vector<typename Accumulator<W>::type> run_shards(int n, const std::vector<int>& firsts,
                                                      int threads, const Step& step,
                                                      const Leaf& leaf) {
  std::vector<typename Accumulator<W>::type> out(firsts.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    PrefixWalker<W, Step, Leaf> walker(n, step, leaf);
    for (std::size_t i = next++; i < firsts.size(); i = next++) {
      try {
        out[i] = walker.run(firsts[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int t = std::clamp(threads > 0 ? threads : default_thread_count(), 1,
                           static_cast<int>(firsts.size()));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double pairwise_total(const std::vector<RealAccumulator>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo].total();
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_total(parts, lo, mid) + pairwise_total(parts, mid, hi);
}

std::vector<int> all_firsts(int n) {
  std::vector<int> f(n);
  for (int i = 0; i < n; ++i) f[i] = i + 1;
  return f;
}

void check_range(int n, int minimum, const EnumerationOptions& options, const char* what) {
  if (n < minimum) {
    throw Error(ErrorCode::TooShort, std::string(what) + " needs n >= " + std::to_string(minimum) +
                                         ", got " + std::to_string(n));
  }
  if (n > options.n_max || n > 20) {
    throw Error(ErrorCode::TooLarge,
                std::string(what) + ": n = " + std::to_string(n) + " exceeds the exhaustive limit " +
                    std::to_string(std::min(options.n_max, 20)) +
                    "; use the Monte-Carlo or spectral estimate instead");
  }
}

template <typename W>
std::vector<W> convert(std::span<const double> table) {
  std::vector<W> out(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if constexpr (std::is_same_v<W, int128>) {
      out[i] = static_cast<int128>(static_cast<long long>(table[i]));
    } else {
      out[i] = table[i];
    }
  }
  return out;
}

inline std::uint64_t rank_of(const int* vals, int start, int length, int n) {
  int buf[WeightScheme::kMaxWindow];
  for (int i = 0; i < length; ++i) buf[i] = vals[(start + i) % n];
  return window_rank(std::span<const int>(buf, length));
}

template <typename W>
EnumerationResult enumerate_typed(int n, const WeightScheme& scheme, Mode mode, int threads) {
  const int m = scheme.arity();
  const int w = scheme.window();
  const auto wt = convert<W>(scheme.wt_table());
  const auto wt1 = convert<W>(scheme.wt1_table());
  const auto wt2 = convert<W>(scheme.wt2_table());

  auto linear_step = [&](const int* vals, int len) -> W {
    W f = W(1);
    if (len == m && len < n) f = wt1[rank_of(vals, 0, m, n)];
    if (len > m) f = multiply(f, wt[rank_of(vals, len - w, w, n)]);
    return f;
  };
  auto linear_leaf = [&](const int* vals) -> W {
    W f = wt2[rank_of(vals, n - m, m, n)];
    if (n == m) f = multiply(f, wt1[rank_of(vals, 0, m, n)]);
    return f;
  };
  auto cyclic_step = [&](const int* vals, int len) -> W {
    return len >= w ? wt[rank_of(vals, len - w, w, n)] : W(1);
  };
  auto cyclic_leaf = [&](const int* vals) -> W {
    W f = W(1);
    for (int j = n - m; j < n && f != W(0); ++j) f = multiply(f, wt[rank_of(vals, j, w, n)]);
    return f;
  };

  EnumerationResult result;
  result.n = n;
  result.mode = mode;
  result.scheme_digest = scheme.digest();
  auto finish = [&](const auto& parts) {
    if constexpr (std::is_same_v<W, int128>) {
      IntAccumulator total;
      for (const auto& p : parts) total.merge(p);
      result.exact = true;
      result.integer = total.sum;
      result.real = static_cast<double>(total.sum);
    } else {
      result.exact = false;
      result.real = pairwise_total(parts, 0, parts.size());
    }
  };
  if (mode == Mode::Linear) {
    finish(run_shards<W>(n, all_firsts(n), threads, linear_step, linear_leaf));
  } else {
    finish(run_shards<W>(n, all_firsts(n), threads, cyclic_step, cyclic_leaf));
  }
  return result;
}

EnumerationResult enumerate(int n, const WeightScheme& scheme, Mode mode, int threads) {
  return scheme.is_integral() ? enumerate_typed<int128>(n, scheme, mode, threads)
                              : enumerate_typed<double>(n, scheme, mode, threads);
}

}  // namespace

EnumerationResult alpha_bruteforce(int n, const WeightScheme& scheme,
                                   const EnumerationOptions& options) {
  check_range(n, scheme.arity(), options, "alpha_bruteforce");
  return enumerate(n, scheme, Mode::Linear, options.threads);
}

EnumerationResult beta_bruteforce(int n, const WeightScheme& scheme,
                                  const EnumerationOptions& options) {
  check_range(n, scheme.window(), options, "beta_bruteforce");
  return enumerate(n, scheme, Mode::Cyclic, options.threads);
}

int128 weighted_cyclic_123_sum(int n, const EnumerationOptions& options) {
  return beta_bruteforce(n, WeightScheme::double_descent_weighted(), options).integer;
}

namespace {

// Factor 0 kills a double ascent ending at len-1, factor 2 marks a double
// descent there.
inline int128 corollary_factor(const int* v, int len) {
  if (len < 3) return 1;
  const int a = v[len - 3], b = v[len - 2], c = v[len - 1];
  if (a < b && b < c) return 0;
  return a > b && b > c ? 2 : 1;
}

}  // namespace

int128 corollary_count(int n, const EnumerationOptions& options) {
  check_range(n, 3, options, "corollary_count");
  auto step = [](const int* v, int len) -> int128 { return corollary_factor(v, len); };
  auto leaf = [n](const int* v) -> int128 { return v[n - 2] > v[n - 1] ? 1 : 0; };
  const auto parts = run_shards<int128>(n, {n}, options.threads, step, leaf);
  return parts.front().sum;
}

std::vector<CorollaryTerm> corollary_terms(int n, const EnumerationOptions& options) {
  check_range(n, 3, options, "corollary_terms");
  std::vector<int> e(n);
  e[0] = n;
  for (int i = 1; i < n; ++i) e[i] = i;
  std::vector<CorollaryTerm> out;
  do {
    Permutation pi(e);
    if (double_ascents(pi, Reading::Linear) == 0 && e[n - 2] > e[n - 1]) {
      out.push_back({pi, double_descents(pi, Reading::Linear)});
    }
  } while (std::next_permutation(e.begin() + 1, e.end()));
  return out;
}

std::uint64_t alternating_count(int n, AlternatingShape shape, const EnumerationOptions& options) {
  check_range(n, 1, options, "alternating_count");
  if (n == 1) return 1;
  // Whether the step from position i to i+1 (0-based) must rise.
  auto rises = [shape, n](int i) {
    switch (shape) {
      case AlternatingShape::UpDown: return i % 2 == 0;
      case AlternatingShape::DownUp: return i % 2 == 1;
      case AlternatingShape::EndsWithAscent: return (n - 2 - i) % 2 == 0;
    }
    return false;
  };
  auto step = [&](const int* v, int len) -> int128 {
    if (len < 2) return 1;
    const bool up = v[len - 2] < v[len - 1];
    return up == rises(len - 2) ? 1 : 0;
  };
  auto leaf = [](const int*) -> int128 { return 1; };
  const auto parts = run_shards<int128>(n, all_firsts(n), options.threads, step, leaf);
  int128 total = 0;
  for (const auto& p : parts) total += p.sum;
  return static_cast<std::uint64_t>(total);
}

namespace {

constexpr std::int64_t kChunk = 1 << 15;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Running mean and squared-deviation sum.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / total;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
    count += o.count;
  }
};

}  // namespace

MCEstimate beta_montecarlo(int n, const WeightScheme& scheme, std::int64_t samples,
                           std::uint64_t seed, int threads) {
  const int w = scheme.window();
  if (n < w) {
    throw Error(ErrorCode::TooShort, "beta_montecarlo needs n >= " + std::to_string(w));
  }
  if (samples < 1) throw Error(ErrorCode::OutOfDomain, "samples must be >= 1");

  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> parts(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  const auto table = scheme.wt_table();

  auto worker = [&] {
    std::vector<double> x(n);
    double buf[WeightScheme::kMaxWindow];
    for (std::int64_t c = next++; c < chunks; c = next++) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(c))));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const std::int64_t count = std::min(kChunk, samples - c * kChunk);
      Moments mom;
      for (std::int64_t s = 0; s < count; ++s) {
        for (auto& xi : x) xi = unit(rng);
        double value = 1.0;
        for (int j = 0; j < n && value != 0.0; ++j) {
          for (int i = 0; i < w; ++i) buf[i] = x[(j + i) % n];
          value *= table[window_rank(std::span<const double>(buf, w))];
        }
        mom.add(value);
      }
      parts[static_cast<std::size_t>(c)] = mom;
    }
  };
  const int t = static_cast<int>(
      std::clamp<std::int64_t>(threads > 0 ? threads : default_thread_count(), 1, chunks));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Moments total;
  for (const auto& p : parts) total.merge(p);
  MCEstimate est;
  est.mean = total.mean;
  est.samples = samples;
  est.seed = seed;
  est.std_error = samples > 1 ? std::sqrt(total.m2 / static_cast<double>(samples - 1) /
                                          static_cast<double>(samples))
                              : 0.0;
  return est;
}

}  // namespace cycavoid
