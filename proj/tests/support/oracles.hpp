#pragma once

// Slow reference implementations used only by tests. They share nothing
// with the library's enumeration path: permutations come from
// std::next_permutation and windows are standardized by sorting.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

inline std::string standardize_word(const std::vector<int>& window) {
  std::vector<int> sorted = window;
  std::sort(sorted.begin(), sorted.end());
  std::string w;
  for (int v : window) {
    w.push_back(static_cast<char>('1' + (std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin())));
  }
  return w;
}

using WindowWeight = std::function<double(const std::string&)>;

inline WindowWeight avoid(std::vector<std::string> forbidden) {
  return [forbidden](const std::string& w) {
    return std::find(forbidden.begin(), forbidden.end(), w) == forbidden.end() ? 1.0 : 0.0;
  };
}

inline WindowWeight double_descent_weights() {
  return [](const std::string& w) { return w == "123" ? 0.0 : (w == "321" ? 2.0 : 1.0); };
}

inline double beta(int n, int window, const WindowWeight& wt) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  double total = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < n && prod != 0.0; ++i) {
      std::vector<int> win;
      for (int j = 0; j < window; ++j) win.push_back(p[(i + j) % n]);
      prod *= wt(standardize_word(win));
    }
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline double alpha(int n, int window, const WindowWeight& wt) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  double total = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i + window <= n && prod != 0.0; ++i) {
      prod *= wt(standardize_word(std::vector<int>(p.begin() + i, p.begin() + i + window)));
    }
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline long long up_down_count(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  long long count = 0;
  do {
    bool ok = true;
    for (int i = 0; i + 1 < n && ok; ++i) ok = (p[i] < p[i + 1]) == (i % 2 == 0);
    count += ok;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// trace(A^n) for a small dense row-major matrix, by plain multiplication.
inline double dense_trace_power(const std::vector<double>& a, std::size_t d, int n) {
  std::vector<double> p(d * d, 0.0), q(d * d);
  for (std::size_t i = 0; i < d; ++i) p[i * d + i] = 1.0;
  for (int k = 0; k < n; ++k) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l) {
        const double v = a[i * d + l];
        if (v == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) q[i * d + j] += v * p[l * d + j];
      }
    std::swap(p, q);
  }
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i) tr += p[i * d + i];
  return tr;
}

}  // namespace oracle
