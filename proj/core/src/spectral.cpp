#include "cycavoid/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <lapacke.h>

#include "cycavoid/enumerate.hpp"
#include "cycavoid/error.hpp"
#include "cycavoid/permutation.hpp"

namespace cycavoid {

std::string_view to_string(TieRule rule) noexcept {
  return rule == TieRule::Refined ? "refined" : "positional";
}

namespace {

std::size_t checked_power(int base, int exponent, std::size_t cap) {
  std::size_t p = 1;
  for (int i = 0; i < exponent; ++i) {
    p *= static_cast<std::size_t>(base);
    if (p > cap) {
      throw Error(ErrorCode::ResolutionTooHigh, "N^m = " + std::to_string(base) + "^" +
                                                    std::to_string(exponent) + " exceeds the cell budget " +
                                                    std::to_string(cap));
    }
  }
  return p;
}

void decode_cells(std::size_t index, int n_cells, std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % n_cells);
    index /= n_cells;
  }
}

// Ranks of every relative order of `cells` that agrees with the cell order,
// ascending. Coordinates in distinct cells are ordered by cell; each group
// sharing a cell may appear in any internal order.
std::vector<std::uint64_t> consistent_orders(std::span<const int> cells) {
  const int m = static_cast<int>(cells.size());
  std::vector<int> by_cell(m);
  for (int i = 0; i < m; ++i) by_cell[i] = i;
  std::stable_sort(by_cell.begin(), by_cell.end(),
                   [&](int a, int b) { return cells[a] < cells[b]; });

  struct Group {
    std::vector<int> positions;
    int low_rank;
    std::vector<int> perm;
  };
  std::vector<Group> groups;
  for (int r = 0; r < m; ++r) {
    const int pos = by_cell[r];
    if (groups.empty() || cells[groups.back().positions.front()] != cells[pos]) {
      groups.push_back({{}, r + 1, {}});
    }
    groups.back().positions.push_back(pos);
  }
  for (auto& g : groups) {
    g.perm.resize(g.positions.size());
    for (std::size_t i = 0; i < g.perm.size(); ++i) g.perm[i] = static_cast<int>(i);
  }

  std::vector<std::uint64_t> ranks;
  std::vector<int> sigma(m);
  while (true) {
    for (const auto& g : groups) {
      for (std::size_t j = 0; j < g.positions.size(); ++j) sigma[g.positions[j]] = g.low_rank + g.perm[j];
    }
    ranks.push_back(window_rank(std::span<const int>(sigma)));
    std::size_t gi = 0;
    while (gi < groups.size() && !std::next_permutation(groups[gi].perm.begin(), groups[gi].perm.end())) {
      ++gi;
    }
    if (gi == groups.size()) break;
  }
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

}  // namespace

StateSpace::StateSpace(int arity, int resolution, TieRule rule)
    : arity_(arity), resolution_(resolution), rule_(rule) {
  if (arity < 1) throw Error(ErrorCode::OutOfDomain, "arity must be >= 1");
  if (resolution < 2) throw Error(ErrorCode::OutOfDomain, "resolution must be >= 2");
  const std::size_t n_cells = checked_power(resolution, arity, static_cast<std::size_t>(-1) / 2);
  const double cell_volume = std::pow(static_cast<double>(resolution), -arity);

  offset_.reserve(n_cells + 1);
  order_.reserve(n_cells);
  std::vector<int> c(arity);
  for (std::size_t ci = 0; ci < n_cells; ++ci) {
    offset_.push_back(order_.size());
    decode_cells(ci, resolution, c);
    if (rule == TieRule::Positional) {
      order_.push_back(window_rank(std::span<const int>(c)));
      cell_of_.push_back(ci);
      measure_.push_back(cell_volume);
      continue;
    }
    const auto ranks = consistent_orders(c);
    const double share = cell_volume / static_cast<double>(ranks.size());
    for (auto r : ranks) {
      order_.push_back(r);
      cell_of_.push_back(ci);
      measure_.push_back(share);
    }
  }
  offset_.push_back(order_.size());
}

std::vector<int> StateSpace::cells(std::size_t state) const {
  std::vector<int> c(arity_);
  decode_cells(cell_of_[state], resolution_, c);
  return c;
}

std::size_t StateSpace::cell_index_of(std::span<const int> cells) const noexcept {
  std::size_t ci = 0;
  for (int c : cells) ci = ci * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(c);
  return ci;
}

std::size_t StateSpace::find(std::size_t cell_index, std::uint64_t order_rank) const {
  if (cell_index + 1 >= offset_.size()) throw Error(ErrorCode::OutOfDomain, "cell index out of range");
  const auto first = order_.begin() + static_cast<std::ptrdiff_t>(offset_[cell_index]);
  const auto last = order_.begin() + static_cast<std::ptrdiff_t>(offset_[cell_index + 1]);
  const auto it = std::lower_bound(first, last, order_rank);
  if (it == last || *it != order_rank) {
    throw Error(ErrorCode::OutOfDomain, "order is inconsistent with the cell tuple");
  }
  return static_cast<std::size_t>(it - order_.begin());
}

GridFunction boundary_function(const WeightScheme& scheme, const StateSpace& space, Boundary which) {
  if (scheme.arity() != space.arity()) {
    throw Error(ErrorCode::InvalidScheme, "scheme arity does not match the grid");
  }
  GridFunction f;
  f.values.resize(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto r = space.order_rank(s);
    f.values[s] = which == Boundary::Initial ? scheme.wt1(r) : scheme.wt2(r);
  }
  return f;
}

double inner_product(const StateSpace& space, const GridFunction& f, const GridFunction& g) {
  if (f.values.size() != space.size() || g.values.size() != space.size()) {
    throw Error(ErrorCode::OutOfDomain, "grid function size does not match the state space");
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < space.size(); ++s) sum += space.measure(s) * f.values[s] * g.values[s];
  return sum;
}

OperatorMatrix::OperatorMatrix(StateSpace space, std::vector<std::size_t> row_ptr,
                               std::vector<std::uint32_t> cols, std::vector<double> vals,
                               std::string scheme_digest)
    : space_(std::move(space)),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      vals_(std::move(vals)),
      digest_(std::move(scheme_digest)),
      nonnegative_(std::all_of(vals_.begin(), vals_.end(), [](double v) { return v >= 0.0; })) {}

double OperatorMatrix::entry(std::size_t row, std::size_t col) const {
  const auto c = row_cols(row);
  const auto it = std::lower_bound(c.begin(), c.end(), static_cast<std::uint32_t>(col));
  if (it == c.end() || *it != col) return 0.0;
  return row_vals(row)[static_cast<std::size_t>(it - c.begin())];
}

void OperatorMatrix::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t d = dimension();
  for (std::size_t r = 0; r < d; ++r) {
    double acc = 0.0;
    for (std::size_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) acc += vals_[e] * in[cols_[e]];
    out[r] = acc;
  }
}

void OperatorMatrix::apply_block(const double* in, double* out, std::size_t width) const {
  const std::size_t d = dimension();
  for (std::size_t r = 0; r < d; ++r) {
    double* o = out + r * width;
    std::fill(o, o + width, 0.0);
    for (std::size_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) {
      const double v = vals_[e];
      const double* src = in + static_cast<std::size_t>(cols_[e]) * width;
      for (std::size_t j = 0; j < width; ++j) o[j] += v * src[j];
    }
  }
}

std::vector<double> OperatorMatrix::dense() const {
  const std::size_t d = dimension();
  std::vector<double> a(d * d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) a[r * d + cols_[e]] = vals_[e];
  }
  return a;
}

OperatorMatrix assemble_operator(const WeightScheme& scheme, int resolution, const GridOptions& options) {
  const int m = scheme.arity();
  checked_power(resolution, m, options.max_cells);
  StateSpace space(m, resolution, options.rule);
  const std::size_t d = space.size();
  const std::size_t stride = space.cell_count() / static_cast<std::size_t>(resolution);  // N^(m-1)
  const double inv_n = 1.0 / resolution;
  const auto wt = scheme.wt_table();

  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  row_ptr.reserve(d + 1);

  std::vector<int> c(m);
  std::vector<std::pair<std::uint32_t, double>> row;
  // Sort keys: cell * (2m + 2) + sub-key, the sub-key placing coordinates
  // that share a cell in their tracked order.
  const int key_base = 2 * m + 2;
  std::vector<int> keys(m + 1);
  std::vector<int> same_cell;
  for (std::size_t r = 0; r < d; ++r) {
    decode_cells(space.cell_index(r), resolution, c);
    const std::size_t col_base = space.cell_index(r) / static_cast<std::size_t>(resolution);
    row.clear();

    if (options.rule == TieRule::Positional) {
      for (int t = 0; t < resolution; ++t) {
        keys[0] = t;
        for (int i = 0; i < m; ++i) keys[i + 1] = c[i];
        const double w = wt[window_rank(std::span<const int>(keys))];
        if (w == 0.0) continue;
        const std::size_t col = space.find(static_cast<std::size_t>(t) * stride + col_base,
                                           window_rank(std::span<const int>(keys.data(), m)));
        row.emplace_back(static_cast<std::uint32_t>(col), w * inv_n);
      }
    } else {
      const Permutation tau = pattern_unrank(space.order_rank(r), m);
      for (int i = 0; i < m; ++i) keys[i + 1] = c[i] * key_base + 2 * tau.at(i + 1);
      for (int t = 0; t < resolution; ++t) {
        same_cell.clear();
        for (int i = 0; i < m; ++i) {
          if (c[i] == t) same_cell.push_back(2 * tau.at(i + 1));
        }
        std::sort(same_cell.begin(), same_cell.end());
        const int k = static_cast<int>(same_cell.size());
        const double share = inv_n / (k + 1);
        for (int slot = 0; slot <= k; ++slot) {
          const int sub = k == 0 ? 0 : (slot < k ? same_cell[slot] - 1 : same_cell[k - 1] + 1);
          keys[0] = t * key_base + sub;
          const double w = wt[window_rank(std::span<const int>(keys))];
          if (w == 0.0) continue;
          const std::size_t col = space.find(static_cast<std::size_t>(t) * stride + col_base,
                                             window_rank(std::span<const int>(keys.data(), m)));
          row.emplace_back(static_cast<std::uint32_t>(col), w * share);
        }
      }
    }

    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!cols.empty() && cols.size() > row_ptr.back() && cols.back() == row[i].first) {
        vals.back() += row[i].second;
      } else {
        cols.push_back(row[i].first);
        vals.push_back(row[i].second);
      }
    }
    row_ptr.push_back(cols.size());
  }
  return OperatorMatrix(std::move(space), std::move(row_ptr), std::move(cols), std::move(vals),
                        scheme.digest());
}

double top_eigenvalue(const OperatorMatrix& m, double tol, int max_iterations) {
  if (!m.is_nonnegative()) {
    throw Error(ErrorCode::RequiresNonnegative,
                "power iteration needs a nonnegative scheme; use full_spectrum instead");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::OutOfDomain, "tolerance must be positive");
  const std::size_t d = m.dimension();

  double max_row_sum = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    double s = 0.0;
    for (double v : m.row_vals(r)) s += v;
    max_row_sum = std::max(max_row_sum, s);
  }
  if (max_row_sum == 0.0) return 0.0;
  // A positive shift makes the Perron root the unique eigenvalue of largest
  // modulus even for imprimitive matrices.
  const double shift = 0.1 * max_row_sum;

  std::vector<double> v(d, 1.0 / static_cast<double>(d)), w(d);
  double previous = -1.0;
  for (int it = 0; it < max_iterations; ++it) {
    m.apply(v, w);
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      w[i] += shift * v[i];
      total += w[i];
    }
    const double lambda = total - shift;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / total;
    if (std::fabs(lambda - previous) <= tol * std::max(std::fabs(lambda), 1e-14 * shift)) {
      return lambda;
    }
    previous = lambda;
  }
  throw Error(ErrorCode::EigenFailure,
              "power iteration did not reach tolerance in " + std::to_string(max_iterations) + " steps");
}

namespace {

bool modulus_order(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<std::complex<double>> dense_eigenvalues(std::vector<double> a, std::size_t d) {
  std::vector<double> wr(d), wi(d);
  const auto n = static_cast<lapack_int>(d);
  const lapack_int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                        wi.data(), nullptr, n, nullptr, n);
  if (info != 0) {
    throw Error(ErrorCode::EigenFailure, "dgeev returned info = " + std::to_string(info) +
                                             (info > 0 ? " (QR iteration did not converge)" : ""));
  }
  std::vector<std::complex<double>> ev(d);
  for (std::size_t i = 0; i < d; ++i) ev[i] = {wr[i], wi[i]};
  std::sort(ev.begin(), ev.end(), modulus_order);
  return ev;
}

// Orthonormalizes the column-major d x p block in place (two passes of
// modified Gram-Schmidt); collapsed columns are replaced by fresh random
// directions.
void orthonormalize(std::vector<double>& q, std::size_t d, std::size_t p, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (std::size_t j = 0; j < p; ++j) {
    double* qj = q.data() + j * d;
    for (int attempt = 0;; ++attempt) {
      double before = 0.0;
      for (std::size_t i = 0; i < d; ++i) before += qj[i] * qj[i];
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          const double* qk = q.data() + k * d;
          double dot = 0.0;
          for (std::size_t i = 0; i < d; ++i) dot += qk[i] * qj[i];
          for (std::size_t i = 0; i < d; ++i) qj[i] -= dot * qk[i];
        }
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) norm += qj[i] * qj[i];
      if (norm > 1e-24 * before && norm > 0.0) {
        const double inv = 1.0 / std::sqrt(norm);
        for (std::size_t i = 0; i < d; ++i) qj[i] *= inv;
        break;
      }
      if (attempt > 8) throw Error(ErrorCode::EigenFailure, "could not extend orthonormal basis");
      for (std::size_t i = 0; i < d; ++i) qj[i] = gauss(rng);
    }
  }
}

std::vector<std::complex<double>> subspace_eigenvalues(const OperatorMatrix& m, std::size_t top_k) {
  const std::size_t d = m.dimension();
  const std::size_t p = std::min(d, std::max(2 * top_k, top_k + 10));
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  std::vector<double> q(d * p), z(d * p), h(p * p);
  for (auto& x : q) x = gauss(rng);
  orthonormalize(q, d, p, rng);

  std::vector<std::complex<double>> previous;
  constexpr int kMaxIterations = 5000;
  for (int it = 0; it < kMaxIterations; ++it) {
    for (std::size_t j = 0; j < p; ++j) {
      m.apply({q.data() + j * d, d}, {z.data() + j * d, d});
    }
    // Rayleigh quotient H = Q^T M Q, row-major.
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = 0; b < p; ++b) {
        double dot = 0.0;
        const double* qa = q.data() + a * d;
        const double* zb = z.data() + b * d;
        for (std::size_t i = 0; i < d; ++i) dot += qa[i] * zb[i];
        h[a * p + b] = dot;
      }
    }
    auto ritz = dense_eigenvalues(h, p);
    ritz.resize(top_k);
    if (!previous.empty()) {
      const double scale = std::max(std::abs(ritz.front()), 1e-300);
      double change = 0.0;
      for (std::size_t i = 0; i < top_k; ++i) change = std::max(change, std::abs(ritz[i] - previous[i]));
      if (change <= 1e-12 * scale) return ritz;
    }
    previous = std::move(ritz);
    std::swap(q, z);
    orthonormalize(q, d, p, rng);
  }
  throw Error(ErrorCode::EigenFailure, "subspace iteration did not converge for top " +
                                           std::to_string(top_k) + " eigenvalues");
}

}  // namespace

SpectrumResult full_spectrum(const OperatorMatrix& m, std::size_t top_k, EigenMethod method) {
  const std::size_t d = m.dimension();
  if (top_k > d) {
    throw Error(ErrorCode::OutOfDomain, "top_k = " + std::to_string(top_k) + " exceeds dimension " +
                                            std::to_string(d));
  }
  const std::size_t want = top_k == 0 ? d : top_k;
  if (method == EigenMethod::Auto) {
    method = (d <= 1500 || want > 64 || 2 * want >= d) ? EigenMethod::Dense : EigenMethod::Subspace;
  }
  if (method == EigenMethod::Subspace && want == d) method = EigenMethod::Dense;

  SpectrumResult result;
  result.resolution = m.resolution();
  result.dimension = d;
  result.scheme_digest = m.scheme_digest();
  if (method == EigenMethod::Dense) {
    result.eigenvalues = dense_eigenvalues(m.dense(), d);
    result.eigenvalues.resize(want);
    result.complete = want == d;
  } else {
    result.eigenvalues = subspace_eigenvalues(m, want);
    result.complete = false;
  }
  return result;
}

std::vector<double> trace_powers(const OperatorMatrix& m, int n_max, int threads) {
  if (n_max < 1) throw Error(ErrorCode::OutOfDomain, "n_max must be >= 1");
  const std::size_t d = m.dimension();
  constexpr std::size_t kBlock = 32;
  const std::size_t blocks = (d + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> per_block(blocks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::vector<double> p, q;
    for (std::size_t b = next++; b < blocks; b = next++) {
      const std::size_t c0 = b * kBlock;
      const std::size_t width = std::min(kBlock, d - c0);
      p.assign(d * width, 0.0);
      q.assign(d * width, 0.0);
      for (std::size_t j = 0; j < width; ++j) p[(c0 + j) * width + j] = 1.0;
      auto& traces = per_block[b];
      traces.assign(static_cast<std::size_t>(n_max), 0.0);
      for (int k = 0; k < n_max; ++k) {
        m.apply_block(p.data(), q.data(), width);
        double tr = 0.0;
        for (std::size_t j = 0; j < width; ++j) tr += q[(c0 + j) * width + j];
        traces[static_cast<std::size_t>(k)] = tr;
        std::swap(p, q);
      }
    }
  };
  const int t = std::clamp(threads > 0 ? threads : default_thread_count(), 1, static_cast<int>(blocks));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<double> out(static_cast<std::size_t>(n_max), 0.0);
  for (const auto& traces : per_block) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += traces[k];
  }
  return out;
}

double trace_power(const OperatorMatrix& m, int n) {
  if (n < m.arity() + 1) {
    throw Error(ErrorCode::TooShort, "trace_power needs n >= m + 1 = " + std::to_string(m.arity() + 1));
  }
  return trace_powers(m, n).back();
}

double power_sum(const SpectrumResult& spectrum, int n) {
  std::complex<double> sum = 0.0;
  for (const auto& lambda : spectrum.eigenvalues) {
    std::complex<double> p = 1.0;
    for (int i = 0; i < n; ++i) p *= lambda;
    sum += p;
  }
  return sum.real();
}

double alpha_spectral(const WeightScheme& scheme, int resolution, int n, const GridOptions& options) {
  const int m = scheme.arity();
  if (n < m) throw Error(ErrorCode::TooShort, "alpha_spectral needs n >= m = " + std::to_string(m));
  const OperatorMatrix op = assemble_operator(scheme, resolution, options);
  GridFunction v = boundary_function(scheme, op.space(), Boundary::Initial);
  const GridFunction mu = boundary_function(scheme, op.space(), Boundary::Final);
  std::vector<double> w(v.values.size());
  for (int i = 0; i < n - m; ++i) {
    op.apply(v.values, w);
    std::swap(v.values, w);
  }
  return inner_product(op.space(), v, mu);
}

double spectrum_213_residual(double lambda) {
  return std::erf(1.0 / (std::numbers::sqrt2 * lambda)) - std::sqrt(2.0 / std::numbers::pi);
}

double solve_213_spectrum(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::OutOfDomain, "tolerance must be positive");
  // Bisection in u = 1/(sqrt(2) lambda); erf is increasing, so the bracket
  // [0, 6] holds the single crossing of erf(u) = sqrt(2/pi) < 1.
  const double target = std::sqrt(2.0 / std::numbers::pi);
  double lo = 0.0, hi = 6.0;
  auto lambda_of = [](double u) { return 1.0 / (std::numbers::sqrt2 * u); };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::erf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (lo > 0.0 && lambda_of(lo) - lambda_of(hi) <= tol) break;
  }
  return lambda_of(0.5 * (lo + hi));
}

}  // namespace cycavoid
