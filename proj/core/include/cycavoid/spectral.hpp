#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cycavoid/weight_scheme.hpp"

namespace cycavoid {

/// How coordinates that fall into the same grid cell are compared.
///
/// Every coordinate is discretized to the midpoint (i - 1/2)/N of its cell.
/// Two coordinates in different cells compare by cell. Coordinates sharing
/// a cell are genuinely unordered at this resolution; the rules differ in
/// how they treat them.
enum class TieRule {
  /// A discrete state is a cell tuple plus the relative order of the
  /// coordinates sharing a cell, and a new coordinate entering a cell that
  /// is already occupied takes each admissible slot with equal probability.
  /// Every pair of coordinates that appears together in some window keeps
  /// one consistent order across all windows, so the only quadrature error
  /// comes from three or more coordinates crowding a cell.
  Refined,
  /// One state per cell tuple; ties go to the earlier position, as in
  /// `standardize`. Entries are then exactly wt/N, at the price of an
  /// O(1/N) bias along the diagonal cells.
  Positional,
};

std::string_view to_string(TieRule rule) noexcept;

struct GridOptions {
  TieRule rule = TieRule::Refined;
  /// Upper bound on N^m.
  std::size_t max_cells = 20'000;
};

/// The discrete states of the grid on [0,1]^m.
///
/// States are ordered by cell tuple in mixed radix (first coordinate most
/// significant, last fastest) and, within a cell tuple, by the rank of their
/// relative order. Positional grids have exactly one state per cell tuple.
class StateSpace {
 public:
  StateSpace(int arity, int resolution, TieRule rule);

  int arity() const noexcept { return arity_; }
  int resolution() const noexcept { return resolution_; }
  TieRule rule() const noexcept { return rule_; }
  std::size_t size() const noexcept { return order_.size(); }
  std::size_t cell_count() const noexcept { return offset_.size() - 1; }

  /// 0-based cell of each coordinate.
  std::vector<int> cells(std::size_t state) const;
  std::size_t cell_index(std::size_t state) const noexcept { return cell_of_[state]; }
  /// Rank in S_m of the relative order of the m coordinates.
  std::uint64_t order_rank(std::size_t state) const noexcept { return order_[state]; }
  /// Lebesgue measure of the part of [0,1]^m the state stands for.
  double measure(std::size_t state) const noexcept { return measure_[state]; }

  std::size_t cell_index_of(std::span<const int> cells) const noexcept;
  /// Throws OutOfDomain when the (cells, order) pair is not a state.
  std::size_t find(std::size_t cell_index, std::uint64_t order_rank) const;

 private:
  int arity_;
  int resolution_;
  TieRule rule_;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> cell_of_;
  std::vector<std::uint64_t> order_;
  std::vector<double> measure_;
};

/// A discrete function on the grid, one value per state.
struct GridFunction {
  std::vector<double> values;
};

enum class Boundary { Initial, Final };

/// wt1 (initial) or wt2 (final) evaluated at the relative order of each state.
GridFunction boundary_function(const WeightScheme& scheme, const StateSpace& space, Boundary which);

/// Measure-weighted inner product, the discrete L^2([0,1]^m) pairing.
double inner_product(const StateSpace& space, const GridFunction& f, const GridFunction& g);

/// Nystrom matrix of (Tf)(x_1..x_m) = int_0^1 chi(t, x_1..x_m) f(t, x_1..x_{m-1}) dt,
/// stored row-compressed. Row r holds the states reachable by dropping the
/// last coordinate of r and prepending a new first coordinate t.
class OperatorMatrix {
 public:
  OperatorMatrix(StateSpace space, std::vector<std::size_t> row_ptr, std::vector<std::uint32_t> cols,
                 std::vector<double> vals, std::string scheme_digest);

  const StateSpace& space() const noexcept { return space_; }
  std::size_t dimension() const noexcept { return space_.size(); }
  std::size_t nonzeros() const noexcept { return vals_.size(); }
  int resolution() const noexcept { return space_.resolution(); }
  int arity() const noexcept { return space_.arity(); }
  const std::string& scheme_digest() const noexcept { return digest_; }
  bool is_nonnegative() const noexcept { return nonnegative_; }

  double entry(std::size_t row, std::size_t col) const;
  std::span<const std::uint32_t> row_cols(std::size_t row) const noexcept {
    return {cols_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }
  std::span<const double> row_vals(std::size_t row) const noexcept {
    return {vals_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }

  /// out = M * in
  void apply(std::span<const double> in, std::span<double> out) const;
  /// out = M * in for a row-major dimension x width block.
  void apply_block(const double* in, double* out, std::size_t width) const;
  /// Row-major dense copy.
  std::vector<double> dense() const;

 private:
  StateSpace space_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  std::string digest_;
  bool nonnegative_;
};

OperatorMatrix assemble_operator(const WeightScheme& scheme, int resolution,
                                 const GridOptions& options = {});

/// Perron eigenvalue of a nonnegative operator by power iteration, stopped
/// when successive estimates agree to relative tolerance `tol`.
double top_eigenvalue(const OperatorMatrix& m, double tol, int max_iterations = 100'000);

struct SpectrumResult {
  /// Decreasing modulus; conjugate pairs list the positive imaginary part first.
  std::vector<std::complex<double>> eigenvalues;
  int resolution = 0;
  std::size_t dimension = 0;
  std::string scheme_digest;
  /// True when every eigenvalue of the matrix was computed.
  bool complete = false;
};

enum class EigenMethod {
  /// Dense for small matrices or large requests, subspace iteration otherwise.
  Auto,
  /// Balanced Hessenberg reduction and shifted QR on the dense matrix.
  Dense,
  /// Orthogonal iteration on a block of vectors with Rayleigh-Ritz extraction.
  Subspace,
};

/// The `top_k` eigenvalues of largest modulus; `top_k == 0` asks for all.
SpectrumResult full_spectrum(const OperatorMatrix& m, std::size_t top_k,
                             EigenMethod method = EigenMethod::Auto);

/// trace(M^n) by repeated multiplication. Requires n >= m + 1.
double trace_power(const OperatorMatrix& m, int n);
/// trace(M^k) for k = 1..n_max, index k - 1.
std::vector<double> trace_powers(const OperatorMatrix& m, int n_max, int threads = 0);
/// Real part of the sum of the n-th powers of the eigenvalues.
double power_sum(const SpectrumResult& spectrum, int n);

/// <M^(n-m) kappa, mu>, the discrete estimate of alpha_n / n!.
double alpha_spectral(const WeightScheme& scheme, int resolution, int n,
                      const GridOptions& options = {});

/// erf(1 / (sqrt(2) lambda)) - sqrt(2/pi)
double spectrum_213_residual(double lambda);
/// The positive root of `spectrum_213_residual`, to absolute tolerance `tol`.
double solve_213_spectrum(double tol);

}  // namespace cycavoid
