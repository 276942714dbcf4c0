#include "cycavoid/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "cycavoid/error.hpp"

namespace cycavoid {

namespace {

int letter_value(char c) {
  if (c >= '1' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

char value_letter(int v) {
  return v <= 9 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

template <typename T>
std::vector<int> ranks_of(std::span<const T> values) {
  const auto k = values.size();
  std::vector<int> ranks(k);
  for (std::size_t i = 0; i < k; ++i) {
    int r = 1;
    for (std::size_t j = 0; j < k; ++j) {
      r += values[j] < values[i] || (values[j] == values[i] && j < i);
    }
    ranks[i] = r;
  }
  return ranks;
}

}  // namespace

Permutation::Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
  const int n = size();
  if (n == 0) throw Error(ErrorCode::InvalidPermutation, "empty permutation");
  std::vector<bool> seen(n + 1, false);
  for (int v : entries_) {
    if (v < 1 || v > n || seen[v]) {
      throw Error(ErrorCode::InvalidPermutation,
                  "entries are not a bijection on 1.." + std::to_string(n));
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> e(n);
  std::iota(e.begin(), e.end(), 1);
  return Permutation(std::move(e));
}

Permutation Permutation::parse(std::string_view word) {
  std::vector<int> e;
  e.reserve(word.size());
  for (char c : word) {
    const int v = letter_value(c);
    if (v < 0) {
      throw Error(ErrorCode::InvalidPattern, "bad letter '" + std::string(1, c) + "' in \"" +
                                                 std::string(word) + "\"");
    }
    e.push_back(v);
  }
  try {
    return Permutation(std::move(e));
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidPattern, "\"" + std::string(word) + "\" is not a permutation");
  }
}

std::string Permutation::word() const {
  std::string s;
  s.reserve(entries_.size());
  for (int v : entries_) s.push_back(value_letter(v));
  return s;
}

Permutation standardize(std::span<const double> point) {
  if (point.empty()) throw Error(ErrorCode::EmptyPoint, "cannot standardize an empty point");
  return Permutation(ranks_of(point));
}

Permutation standardize(std::span<const int> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyPoint, "cannot standardize an empty point");
  return Permutation(ranks_of(values));
}

std::vector<Permutation> cyclic_windows(const Permutation& pi, int window) {
  const int n = pi.size();
  if (window < 2) throw Error(ErrorCode::TooShort, "window must be at least 2");
  if (n < window) {
    throw Error(ErrorCode::TooShort, "permutation of length " + std::to_string(n) +
                                         " is shorter than window " + std::to_string(window));
  }
  std::vector<Permutation> out;
  out.reserve(n);
  std::vector<int> buf(window);
  const auto e = pi.entries();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < window; ++i) buf[i] = e[(j + i) % n];
    out.push_back(standardize(std::span<const int>(buf)));
  }
  return out;
}

Permutation rotate(const Permutation& pi, int shift) {
  const int n = pi.size();
  const int s = ((shift % n) + n) % n;
  std::vector<int> e(pi.entries().begin(), pi.entries().end());
  std::rotate(e.begin(), e.begin() + s, e.end());
  return Permutation(std::move(e));
}

Permutation complement(const Permutation& pi) {
  const int n = pi.size();
  std::vector<int> e(pi.entries().begin(), pi.entries().end());
  for (int& v : e) v = n + 1 - v;
  return Permutation(std::move(e));
}

std::uint64_t pattern_rank(const Permutation& pattern) {
  if (pattern.size() > 20) throw Error(ErrorCode::TooLarge, "patterns longer than 20 have no 64-bit rank");
  return window_rank(pattern.entries());
}

Permutation pattern_unrank(std::uint64_t rank, int k) {
  if (k < 1 || k > 20) throw Error(ErrorCode::TooLarge, "pattern length must be in 1..20");
  if (rank >= factorial(k)) throw Error(ErrorCode::OutOfDomain, "rank exceeds k!");
  std::vector<int> digits(k);
  for (int i = k - 1; i >= 0; --i) {
    const auto radix = static_cast<std::uint64_t>(k - i);
    digits[i] = static_cast<int>(rank % radix);
    rank /= radix;
  }
  std::vector<int> pool(k);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> e(k);
  for (int i = 0; i < k; ++i) {
    e[i] = pool[digits[i]];
    pool.erase(pool.begin() + digits[i]);
  }
  return Permutation(std::move(e));
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw Error(ErrorCode::Overflow, "factorial outside 0..20");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace cycavoid
