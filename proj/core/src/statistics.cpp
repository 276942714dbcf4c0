#include "cycavoid/statistics.hpp"

#include <string>
#include <vector>

#include "cycavoid/error.hpp"

namespace cycavoid {

namespace {

std::uint64_t rank_at(std::span<const int> e, int start, int length) {
  const int n = static_cast<int>(e.size());
  int buf[WeightScheme::kMaxWindow];
  for (int i = 0; i < length; ++i) buf[i] = e[(start + i) % n];
  return window_rank(std::span<const int>(buf, length));
}

void require_length(const Permutation& pi, int minimum, const char* what) {
  if (pi.size() < minimum) {
    throw Error(ErrorCode::TooShort, std::string(what) + " needs n >= " + std::to_string(minimum) +
                                         ", got n = " + std::to_string(pi.size()));
  }
}

}  // namespace

double linear_weight(const Permutation& pi, const WeightScheme& scheme) {
  const int m = scheme.arity();
  const int n = pi.size();
  require_length(pi, m, "linear_weight");
  const auto e = pi.entries();
  double w = scheme.wt1(rank_at(e, 0, m));
  for (int i = 0; i + m < n; ++i) w *= scheme.wt(rank_at(e, i, m + 1));
  return w * scheme.wt2(rank_at(e, n - m, m));
}

double cyclic_weight(const Permutation& pi, const WeightScheme& scheme) {
  const int m = scheme.arity();
  const int n = pi.size();
  require_length(pi, m + 1, "cyclic_weight");
  const auto e = pi.entries();
  double w = 1.0;
  for (int i = 0; i < n; ++i) w *= scheme.wt(rank_at(e, i, m + 1));
  return w;
}

int double_descents(const Permutation& pi, Reading reading) {
  require_length(pi, 3, "double_descents");
  const int n = pi.size();
  const auto e = pi.entries();
  const int last = reading == Reading::Linear ? n - 2 : n;
  int count = 0;
  for (int i = 0; i < last; ++i) {
    count += e[i] > e[(i + 1) % n] && e[(i + 1) % n] > e[(i + 2) % n];
  }
  return count;
}

int double_ascents(const Permutation& pi, Reading reading) {
  require_length(pi, 3, "double_ascents");
  const int n = pi.size();
  const auto e = pi.entries();
  const int last = reading == Reading::Linear ? n - 2 : n;
  int count = 0;
  for (int i = 0; i < last; ++i) {
    count += e[i] < e[(i + 1) % n] && e[(i + 1) % n] < e[(i + 2) % n];
  }
  return count;
}

}  // namespace cycavoid
