#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cycavoid/enumerate.hpp"
#include "cycavoid/error.hpp"
#include "cycavoid/statistics.hpp"
#include "oracles.hpp"

namespace cycavoid {
namespace {

WeightScheme avoiding(std::vector<std::string> words) { return WeightScheme::from_forbidden_words(words); }

// Frozen brute-force values, n = 3..9 for beta and n = 2..9 for alpha.
const std::vector<long long> kBeta123{3, 12, 45, 234, 1323, 8856, 65529};
const std::vector<long long> kBeta213{3, 8, 35, 168, 917, 5760, 40617};
const std::vector<long long> kBeta123_321{0, 8, 0, 96, 0, 2176, 0};
const std::vector<long long> kAlpha123{2, 5, 17, 70, 349, 2017, 13358, 99377};
const std::vector<long long> kAlpha213{2, 5, 16, 63, 296, 1623, 10176, 71793};
const std::vector<long long> kAlphaDoubleDescent{2, 6, 26, 130, 782, 5474, 43794, 394146};
const std::vector<long long> kAlpha123_321{2, 4, 10, 32, 122, 544, 2770, 15872};

TEST(Enumerate, FrozenBetaValues) {
  for (int n = 3; n <= 9; ++n) {
    const auto i = static_cast<std::size_t>(n - 3);
    EXPECT_EQ(beta_bruteforce(n, avoiding({"123"})).integer, kBeta123[i]) << n;
    EXPECT_EQ(beta_bruteforce(n, avoiding({"321"})).integer, kBeta123[i]) << n;
    EXPECT_EQ(beta_bruteforce(n, avoiding({"213"})).integer, kBeta213[i]) << n;
    EXPECT_EQ(beta_bruteforce(n, avoiding({"123", "321"})).integer, kBeta123_321[i]) << n;
    EXPECT_EQ(beta_bruteforce(n, WeightScheme::double_descent_weighted()).value(), oracle::factorial(n)) << n;
  }
}

TEST(Enumerate, FrozenAlphaValues) {
  for (int n = 2; n <= 9; ++n) {
    const auto i = static_cast<std::size_t>(n - 2);
    EXPECT_EQ(alpha_bruteforce(n, avoiding({"123"})).integer, kAlpha123[i]) << n;
    EXPECT_EQ(alpha_bruteforce(n, avoiding({"321"})).integer, kAlpha123[i]) << n;
    EXPECT_EQ(alpha_bruteforce(n, avoiding({"213"})).integer, kAlpha213[i]) << n;
    EXPECT_EQ(alpha_bruteforce(n, WeightScheme::double_descent_weighted()).integer, kAlphaDoubleDescent[i]) << n;
    EXPECT_EQ(alpha_bruteforce(n, avoiding({"123", "321"})).integer, kAlpha123_321[i]) << n;
  }
}

TEST(Enumerate, AgreesWithIndependentOracle) {
  const std::vector<std::vector<std::string>> sets{{"132"}, {"231", "312"}, {"1234"}, {"2143", "3412"}};
  for (const auto& set : sets) {
    const auto s = avoiding(set);
    const int window = s.window();
    for (int n = window; n <= 8; ++n) {
      EXPECT_EQ(alpha_bruteforce(n, s).value(), oracle::alpha(n, window, oracle::avoid(set))) << n;
      if (n > window) EXPECT_EQ(beta_bruteforce(n, s).value(), oracle::beta(n, window, oracle::avoid(set))) << n;
    }
  }
}

TEST(Enumerate, RealWeightsUseCompensatedSum) {
  WeightScheme s(3, 0.75);
  s.set_wt(Permutation::parse("321"), 1.5);
  s.set_wt(Permutation::parse("123"), 0.1);
  const auto wt = [&](const std::string& w) { return s.wt(Permutation::parse(w)); };
  for (int n = 4; n <= 8; ++n) {
    const auto r = beta_bruteforce(n, s);
    EXPECT_FALSE(r.exact);
    EXPECT_NEAR(r.real, oracle::beta(n, 3, wt), 1e-12 * oracle::factorial(n));
  }
}

TEST(Enumerate, MatchesPointwiseWeights) {
  const auto s = WeightScheme::double_descent_weighted();
  double alpha = 0.0, beta = 0.0;
  std::vector<int> e{1, 2, 3, 4, 5, 6};
  do {
    alpha += linear_weight(Permutation(e), s);
    beta += cyclic_weight(Permutation(e), s);
  } while (std::next_permutation(e.begin(), e.end()));
  EXPECT_EQ(alpha_bruteforce(6, s).value(), alpha);
  EXPECT_EQ(beta_bruteforce(6, s).value(), beta);
}

TEST(EnumerateProperty, EmptySchemeCountsEverything) {
  for (int window : {2, 3, 4}) {
    const WeightScheme all(window, 1.0);
    for (int n = window + 1; n <= 10; ++n) {
      EXPECT_EQ(beta_bruteforce(n, all).value(), oracle::factorial(n));
      EXPECT_EQ(alpha_bruteforce(n, all).value(), oracle::factorial(n));
    }
  }
}

TEST(EnumerateProperty, CyclicBelowLinearBelowFactorial) {
  const std::vector<std::vector<std::string>> sets{{"123"}, {"213"}, {"132", "231"}, {"123", "321"}, {"1324"}};
  for (const auto& set : sets) {
    const auto s = avoiding(set);
    for (int n = s.window() + 1; n <= 9; ++n) {
      const auto b = beta_bruteforce(n, s).integer;
      const auto a = alpha_bruteforce(n, s).integer;
      EXPECT_LE(0, b);
      EXPECT_LE(b, a);
      EXPECT_LE(a, static_cast<int128>(oracle::factorial(n)));
    }
  }
  WeightScheme fractional(3, 0.6);
  fractional.set_wt(Permutation::parse("312"), 0.05);
  for (int n = 4; n <= 8; ++n) EXPECT_LE(beta_bruteforce(n, fractional).real, alpha_bruteforce(n, fractional).real);
}

TEST(EnumerateProperty, ShortestLinearLengthIsBoundaryPairing) {
  WeightScheme s(3, 0.0);
  double expected = 0.0;
  for (std::uint64_t r = 0; r < 2; ++r) {
    s.set_wt1(pattern_unrank(r, 2), 2.0 + r);
    s.set_wt2(pattern_unrank(r, 2), 5.0 - r);
    expected += (2.0 + r) * (5.0 - r);
  }
  EXPECT_EQ(alpha_bruteforce(2, s).value(), expected);
  EXPECT_EQ(alpha_bruteforce(3, avoiding({"123"})).integer, 5);
  EXPECT_EQ(alpha_bruteforce(4, avoiding({"123", "321"})).integer, 10);
}

TEST(EnumerateProperty, ComplementSymmetry) {
  for (int n = 3; n <= 9; ++n) {
    EXPECT_EQ(beta_bruteforce(n, avoiding({"123"})).integer, beta_bruteforce(n, avoiding({"321"})).integer);
  }
}

TEST(Enumerate, OddLengthsCannotAvoidBothMonotonePatterns) {
  for (int n = 3; n <= 11; n += 2) EXPECT_EQ(beta_bruteforce(n, avoiding({"123", "321"})).integer, 0) << n;
}

TEST(Enumerate, ThreadCountDoesNotChangeResults) {
  WeightScheme s(3, 0.3);
  s.set_wt(Permutation::parse("213"), 1.7);
  for (int threads : {1, 2, 3, 8}) {
    EnumerationOptions o;
    o.threads = threads;
    EXPECT_EQ(beta_bruteforce(9, avoiding({"213"}), o).integer, 40617);
    EXPECT_EQ(alpha_bruteforce(9, s, o).real, alpha_bruteforce(9, s).real);
  }
}

TEST(Enumerate, SizeLimits) {
  try {
    beta_bruteforce(12, avoiding({"123"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
  EXPECT_THROW(beta_bruteforce(3, WeightScheme(4, 1.0)), Error);
  EXPECT_THROW(alpha_bruteforce(2, WeightScheme(4, 1.0)), Error);
}

TEST(Enumerate, DoubleDescentIdentity) {
  for (int n = 3; n <= 10; ++n) EXPECT_EQ(weighted_cyclic_123_sum(n), static_cast<int128>(oracle::factorial(n)));
}

TEST(Enumerate, CorollaryTerms) {
  const auto three = corollary_terms(3);
  ASSERT_EQ(three.size(), 1u);
  EXPECT_EQ(three[0].pi.word(), "321");
  EXPECT_EQ(three[0].double_descents, 1);
  EXPECT_EQ(corollary_count(3), 2);

  std::vector<std::string> words;
  long long sum = 0;
  for (const auto& t : corollary_terms(5)) {
    words.push_back(t.pi.word());
    sum += 1LL << t.double_descents;
  }
  EXPECT_EQ(words, (std::vector<std::string>{"51432", "52143", "52431", "53142", "53241", "53421", "54132",
                                             "54231", "54321"}));
  EXPECT_EQ(sum, 24);
  for (int n = 3; n <= 10; ++n) EXPECT_EQ(corollary_count(n), static_cast<int128>(oracle::factorial(n - 1)));
}

TEST(Enumerate, AlternatingCounts) {
  const std::vector<std::uint64_t> euler{1, 1, 2, 5, 16, 61, 272, 1385, 7936};
  for (int n = 1; n <= 9; ++n) {
    EXPECT_EQ(alternating_count(n, AlternatingShape::UpDown), euler[n - 1]) << n;
    EXPECT_EQ(alternating_count(n, AlternatingShape::DownUp), euler[n - 1]) << n;
    EXPECT_EQ(static_cast<long long>(alternating_count(n, AlternatingShape::UpDown)), oracle::up_down_count(n));
  }
  for (int n = 2; n <= 9; ++n) {
    EXPECT_EQ(static_cast<int128>(2 * alternating_count(n, AlternatingShape::UpDown)),
              alpha_bruteforce(n, avoiding({"123", "321"})).integer);
  }
}

TEST(Enumerate, Int128Formatting) {
  EXPECT_EQ(to_string(static_cast<int128>(0)), "0");
  EXPECT_EQ(to_string(static_cast<int128>(-42)), "-42");
  const int128 big = static_cast<int128>(1) << 100;
  EXPECT_EQ(to_string(big), "1267650600228229401496703205376");
}

TEST(MonteCarlo, WithinStatisticalError) {
  struct Case {
    std::vector<std::string> set;
    int n;
    double exact;
  };
  const std::vector<Case> cases{{{"123"}, 6, 234.0 / 720}, {{"213"}, 7, 917.0 / 5040}, {{"123", "321"}, 6, 96.0 / 720}};
  for (const auto& c : cases) {
    const auto est = beta_montecarlo(c.n, avoiding(c.set), 400'000, 2024);
    EXPECT_EQ(est.samples, 400'000);
    EXPECT_GT(est.std_error, 0.0);
    EXPECT_LT(std::abs(est.mean - c.exact), 5.0 * est.std_error) << c.n;
  }
  const auto t4 = beta_montecarlo(7, WeightScheme::double_descent_weighted(), 400'000, 99);
  EXPECT_LT(std::abs(t4.mean - 1.0), 5.0 * t4.std_error);
}

TEST(MonteCarlo, ShortCycles) {
  const auto a = beta_montecarlo(3, avoiding({"123"}), 1'000'000, 42);
  EXPECT_LT(std::abs(a.mean - 0.5), 4.0 * a.std_error);
  EXPECT_EQ(a.seed, 42u);
  const auto t = beta_montecarlo(3, WeightScheme::double_descent_weighted(), 1'000'000, 43);
  EXPECT_LT(std::abs(t.mean - 1.0), 4.0 * t.std_error);
}

TEST(MonteCarlo, EmptySchemeIsExact) {
  const auto est = beta_montecarlo(5, WeightScheme(3, 1.0), 10'000, 1);
  EXPECT_EQ(est.mean, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  const auto s = avoiding({"213"});
  const auto ref = beta_montecarlo(8, s, 100'000, 7, 1);
  for (int threads : {2, 5, 16}) {
    const auto est = beta_montecarlo(8, s, 100'000, 7, threads);
    EXPECT_EQ(est.mean, ref.mean);
    EXPECT_EQ(est.std_error, ref.std_error);
  }
  EXPECT_NE(beta_montecarlo(8, s, 100'000, 8, 1).mean, ref.mean);
}

}  // namespace
}  // namespace cycavoid
