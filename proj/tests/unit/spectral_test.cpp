#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cycavoid/enumerate.hpp"
#include "cycavoid/error.hpp"
#include "cycavoid/series.hpp"
#include "cycavoid/spectral.hpp"
#include "oracles.hpp"

namespace cycavoid {
namespace {

WeightScheme avoiding(std::vector<std::string> words) { return WeightScheme::from_forbidden_words(words); }

GridOptions rule(TieRule r) {
  GridOptions o;
  o.rule = r;
  return o;
}

double total_measure(const StateSpace& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += s.measure(i);
  return sum;
}

TEST(StateSpace, Sizes) {
  const StateSpace refined(2, 64, TieRule::Refined);
  EXPECT_EQ(refined.cell_count(), 4096u);
  EXPECT_EQ(refined.size(), 4160u);
  EXPECT_NEAR(total_measure(refined), 1.0, 1e-12);
  const StateSpace positional(2, 64, TieRule::Positional);
  EXPECT_EQ(positional.size(), 4096u);
  EXPECT_NEAR(total_measure(positional), 1.0, 1e-12);
  const StateSpace cube(3, 5, TieRule::Refined);
  EXPECT_NEAR(total_measure(cube), 1.0, 1e-12);
}

TEST(StateSpace, StatesFollowCellOrder) {
  const StateSpace s(2, 4, TieRule::Refined);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = s.cells(i);
    EXPECT_EQ(s.cell_index_of(c), s.cell_index(i));
    EXPECT_EQ(s.find(s.cell_index(i), s.order_rank(i)), i);
    if (c[0] < c[1]) EXPECT_EQ(s.order_rank(i), 0u);
    if (c[0] > c[1]) EXPECT_EQ(s.order_rank(i), 1u);
  }
  const std::vector<int> increasing{0, 1};
  try {
    s.find(s.cell_index_of(increasing), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}

TEST(Assembly, SingleCoordinateExamples) {
  const auto s = avoiding({"12"});
  const auto positional = assemble_operator(s, 2, rule(TieRule::Positional)).dense();
  EXPECT_EQ(positional, (std::vector<double>{0.0, 0.5, 0.0, 0.0}));
  const auto refined = assemble_operator(s, 2, rule(TieRule::Refined)).dense();
  EXPECT_EQ(refined, (std::vector<double>{0.25, 0.5, 0.0, 0.25}));
}

TEST(Assembly, ZeroOneEntries) {
  const auto m = assemble_operator(avoiding({"123"}), 8, rule(TieRule::Positional));
  for (std::size_t r = 0; r < m.dimension(); ++r) {
    EXPECT_LE(m.row_cols(r).size(), 8u);
    for (double v : m.row_vals(r)) EXPECT_EQ(v, 1.0 / 8);
  }
  const auto refined = assemble_operator(avoiding({"123"}), 8);
  for (std::size_t r = 0; r < refined.dimension(); ++r) EXPECT_LE(refined.row_cols(r).size(), 8u + 2u);
}

TEST(Assembly, RowSums) {
  for (auto r : {TieRule::Refined, TieRule::Positional}) {
    const auto all = assemble_operator(WeightScheme(3, 1.0), 10, rule(r));
    const auto avoid = assemble_operator(avoiding({"213"}), 10, rule(r));
    for (std::size_t i = 0; i < all.dimension(); ++i) {
      const auto v = all.row_vals(i);
      EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), 1.0, 1e-14);
      const auto w = avoid.row_vals(i);
      EXPECT_LE(std::accumulate(w.begin(), w.end(), 0.0), 1.0 + 1e-14);
    }
  }
}

TEST(Assembly, EmptySchemeIsRankOneForSingleCoordinate) {
  const auto m = assemble_operator(WeightScheme(2, 1.0), 12);
  for (double v : m.dense()) EXPECT_DOUBLE_EQ(v, 1.0 / 12);
  const auto spec = full_spectrum(m, 0);
  EXPECT_NEAR(spec.eigenvalues[0].real(), 1.0, 1e-12);
  for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) EXPECT_LT(std::abs(spec.eigenvalues[i]), 1e-12);
}

TEST(Assembly, ResolutionLimit) {
  try {
    assemble_operator(avoiding({"123"}), 200);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResolutionTooHigh);
  }
  GridOptions wide;
  wide.max_cells = 40'000;
  EXPECT_NO_THROW(assemble_operator(avoiding({"12"}), 200, wide));
}

TEST(Traces, MatchDenseProductsAndEigenvalues) {
  WeightScheme signed_scheme(3, 1.0);
  signed_scheme.set_wt(Permutation::parse("132"), -0.5);
  const std::vector<WeightScheme> schemes{avoiding({"123"}), avoiding({"213"}),
                                          WeightScheme::double_descent_weighted(), signed_scheme};
  for (const auto& s : schemes) {
    for (auto r : {TieRule::Refined, TieRule::Positional}) {
      const auto m = assemble_operator(s, 6, rule(r));
      const auto dense = m.dense();
      const auto spec = full_spectrum(m, 0);
      ASSERT_TRUE(spec.complete);
      const auto traces = trace_powers(m, 9);
      for (int n = 3; n <= 9; ++n) {
        const double reference = oracle::dense_trace_power(dense, m.dimension(), n);
        EXPECT_NEAR(traces[n - 1], reference, 1e-12);
        EXPECT_NEAR(trace_power(m, n), reference, 1e-12);
        EXPECT_NEAR(power_sum(spec, n), reference, 1e-8);
      }
    }
  }
}

TEST(Traces, ThreadCountDoesNotChangeResults) {
  const auto m = assemble_operator(avoiding({"213"}), 16);
  const auto ref = trace_powers(m, 8, 1);
  for (int t : {2, 3, 7}) EXPECT_EQ(trace_powers(m, 8, t), ref);
}

TEST(Traces, TooShort) {
  const auto m = assemble_operator(avoiding({"123"}), 4);
  try {
    trace_power(m, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooShort);
  }
}

TEST(Traces, EmptySchemeConstant) {
  // Positional: M^2 is the rank-one averaging matrix. Refined: the split
  // diagonal states leave small eigenvalues that die out with the power.
  const auto positional = trace_powers(assemble_operator(WeightScheme(3, 1.0), 8, rule(TieRule::Positional)), 8);
  const auto refined = trace_powers(assemble_operator(WeightScheme(3, 1.0), 8), 12);
  for (int n = 3; n <= 8; ++n) EXPECT_NEAR(positional[n - 1], 1.0, 1e-12);
  double previous = 1.0;
  for (int n = 3; n <= 12; ++n) {
    const double err = std::abs(refined[n - 1] - 1.0);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-9);
}

TEST(Traces, ConvergeToCyclicDensities) {
  for (const char* w : {"123", "213", "321"}) {
    const auto s = avoiding({w});
    for (int n = 4; n <= 7; ++n) {
      const double exact = beta_bruteforce(n, s).value() / oracle::factorial(n);
      double previous = 1.0;
      for (int N : {16, 32, 64}) {
        const double err = std::abs(trace_power(assemble_operator(s, N), n) - exact);
        EXPECT_LE(err, previous * 1.1 + 1e-12) << w << " n=" << n << " N=" << N;
        previous = err;
      }
      EXPECT_LT(previous, 2e-2) << w << " n=" << n;
    }
  }
}

TEST(Spectrum, OrderingAndMetadata) {
  const auto m = assemble_operator(avoiding({"213"}), 8);
  const auto spec = full_spectrum(m, 10);
  EXPECT_EQ(spec.eigenvalues.size(), 10u);
  EXPECT_EQ(spec.resolution, 8);
  EXPECT_EQ(spec.dimension, m.dimension());
  EXPECT_EQ(spec.scheme_digest, avoiding({"213"}).digest());
  EXPECT_FALSE(spec.complete);
  for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) {
    EXPECT_GE(std::abs(spec.eigenvalues[i - 1]) + 1e-12, std::abs(spec.eigenvalues[i]));
  }
  EXPECT_THROW(full_spectrum(m, m.dimension() + 1), Error);
}

TEST(Spectrum, SubspaceAgreesWithDense) {
  const auto m = assemble_operator(avoiding({"123"}), 24);
  const auto dense = full_spectrum(m, 6, EigenMethod::Dense);
  const auto sub = full_spectrum(m, 6, EigenMethod::Subspace);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(dense.eigenvalues[i] - sub.eigenvalues[i]), 0.0, 1e-9);
}

TEST(Spectrum, PerronConsistency) {
  for (const auto& s : {avoiding({"123"}), avoiding({"213"}), WeightScheme::double_descent_weighted()}) {
    const auto m = assemble_operator(s, 16);
    const double power = top_eigenvalue(m, 1e-13);
    const auto spec = full_spectrum(m, 1);
    EXPECT_NEAR(spec.eigenvalues[0].real(), power, 1e-6 * power);
    EXPECT_NEAR(spec.eigenvalues[0].imag(), 0.0, 1e-12);
  }
}

TEST(Spectrum, LeadingEigenvalues) {
  const auto m123 = assemble_operator(avoiding({"123"}), 64);
  EXPECT_NEAR(top_eigenvalue(m123, 1e-12), eigenvalue_123(0), 1e-3);
  const auto spec = full_spectrum(m123, 4);
  const std::vector<double> expected{eigenvalue_123(0), eigenvalue_123(-1), eigenvalue_123(1), eigenvalue_123(-2)};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(spec.eigenvalues[i].real(), expected[i], 5e-3) << i;
    EXPECT_NEAR(spec.eigenvalues[i].imag(), 0.0, 1e-6) << i;
  }
  const auto t4 = assemble_operator(WeightScheme::double_descent_weighted(), 64);
  EXPECT_NEAR(top_eigenvalue(t4, 1e-12), 1.0, 5e-3);
}

TEST(Spectrum, NegativeWeightsNeedFullSolver) {
  WeightScheme s(3, 1.0);
  s.set_wt(Permutation::parse("231"), -1.0);
  const auto m = assemble_operator(s, 6);
  EXPECT_FALSE(m.is_nonnegative());
  try {
    top_eigenvalue(m, 1e-10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RequiresNonnegative);
  }
  EXPECT_NO_THROW(full_spectrum(m, 0));
}

TEST(Spectrum, Root213) {
  const double lambda = solve_213_spectrum(1e-14);
  EXPECT_LE(std::abs(spectrum_213_residual(lambda)), 1e-9);
  EXPECT_NEAR(lambda, 0.7839769, 1e-6);
  const auto m = assemble_operator(avoiding({"213"}), 64);
  EXPECT_NEAR(top_eigenvalue(m, 1e-12), lambda, 1e-2);
}

TEST(AlphaSpectral, Densities) {
  EXPECT_NEAR(alpha_spectral(WeightScheme(3, 1.0), 16, 6), 1.0, 1e-12);
  EXPECT_NEAR(alpha_spectral(avoiding({"123"}), 64, 6), 349.0 / 720, 2e-2);
  EXPECT_NEAR(alpha_spectral(avoiding({"123", "321"}), 64, 5), 32.0 / 120, 2e-2);
  EXPECT_NEAR(alpha_spectral(avoiding({"213"}), 64, 7), 1623.0 / 5040, 2e-2);
  EXPECT_THROW(alpha_spectral(avoiding({"123"}), 8, 1), Error);
}

TEST(AlphaSpectral, BoundaryWeights) {
  WeightScheme s(2, 1.0);
  s.set_wt1(Permutation::parse("1"), 2.0);
  s.set_wt2(Permutation::parse("1"), 3.0);
  EXPECT_NEAR(alpha_spectral(s, 8, 4), 6.0, 1e-12);
}

}  // namespace
}  // namespace cycavoid
