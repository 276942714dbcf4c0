#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <cstdio>
#include <tuple>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "cycavoid/enumerate.hpp"
#include "cycavoid/error.hpp"
#include "cycavoid/series.hpp"
#include "cycavoid/spectral.hpp"
#include "cycavoid/statistics.hpp"

namespace cycavoid::cli {
namespace {

// Tolerances, one block per criterion.
constexpr double kSeriesResidual = 1e-6;              // 1
constexpr double kSeriesTol = 1e-6;                   // 1, 8
constexpr double kSecondPowerTol = 1e-9;              // 2
constexpr double kSecondPowerError = 1e-6;            // 2
constexpr double kTraceRelError = 2e-2;               // 5
constexpr double kMonotoneSlack = 1.10;               // 5
constexpr double kEigenError = 5e-3;                  // 6
constexpr double kRootTol = 1e-10;                    // 7
constexpr double kRootResidual = 1e-9;                // 7
constexpr double kRootAgreement = 1e-2;               // 7
constexpr double kMonteCarloSigmas = 5.0;             // 9
constexpr double kTraceEigenConsistency = 1e-8;       // 9
constexpr int kGridFine = 64;

WeightScheme avoiding(std::vector<std::string> words) { return WeightScheme::from_forbidden_words(words); }

double factorial_d(int n) { return static_cast<double>(factorial(n)); }

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Check guarded(int id, std::string name, double tolerance, const std::function<void(Check&)>& body) {
  Check c;
  c.id = id;
  c.name = std::move(name);
  c.tolerance = tolerance;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  return c;
}

Check series_vs_bruteforce(const EnumerationOptions& eo) {
  return guarded(1, "cyclic 123 series matches brute force, n = 3..10", kSeriesResidual, [&](Check& c) {
    const auto s = avoiding({"123"});
    bool ok = true;
    for (int n = 3; n <= 10; ++n) {
      const auto exact = beta_bruteforce(n, s, eo).integer;
      const auto v = series_beta_123(n, kSeriesTol);
      const double residual = std::abs(v.value - static_cast<double>(exact));
      c.observed = std::max(c.observed, residual);
      if (static_cast<int128>(std::llround(v.value)) != exact || residual > kSeriesResidual) {
        ok = false;
        c.detail += "n=" + std::to_string(n) + " ";
      }
    }
    c.passed = ok;
    if (ok) c.detail = "rounded series equals every brute-force count";
  });
}

Check second_power() {
  return guarded(2, "series at n = 2 equals 2", kSecondPowerError, [&](Check& c) {
    const auto v = series_beta_123(2, kSecondPowerTol);
    c.observed = std::abs(v.value - 2.0);
    c.passed = c.observed <= kSecondPowerError;
    c.detail = std::string("terms ") + std::to_string(v.terms_used) + ", tail bound " + fmt("%.3g", v.tail_bound);
  });
}

Check double_descent_identity(const EnumerationOptions& eo) {
  return guarded(3, "sum of 2^(cyclic double descents) over cyclic 123-avoiders is n!, n = 3..10", 0.0,
                 [&](Check& c) {
                   bool ok = true;
                   for (int n = 3; n <= 10; ++n) {
                     const int128 got = weighted_cyclic_123_sum(n, eo);
                     const int128 want = static_cast<int128>(factorial(n));
                     const int128 diff = got > want ? got - want : want - got;
                     c.observed = std::max(c.observed, static_cast<double>(diff));
                     if (got != want) {
                       ok = false;
                       c.detail += "n=" + std::to_string(n) + " got " + to_string(got) + " ";
                     }
                   }
                   c.passed = ok;
                   if (ok) c.detail = "exact in 128-bit integers";
                 });
}

Check corollary(const EnumerationOptions& eo) {
  return guarded(4, "leading-n count is (n-1)!, n = 3..10, and the S5 list", 0.0, [&](Check& c) {
    bool ok = true;
    for (int n = 3; n <= 10; ++n) {
      const int128 got = corollary_count(n, eo);
      const int128 want = static_cast<int128>(factorial(n - 1));
      if (got != want) {
        ok = false;
        c.observed = std::max(c.observed, std::abs(static_cast<double>(got - want)));
        c.detail += "n=" + std::to_string(n) + " got " + to_string(got) + " ";
      }
    }
    const std::vector<std::string> expected{"51432", "52143", "52431", "53142", "53241",
                                            "53421", "54132", "54231", "54321"};
    std::vector<std::string> words;
    std::int64_t sum = 0;
    for (const auto& t : corollary_terms(5, eo)) {
      words.push_back(t.pi.word());
      sum += std::int64_t{1} << t.double_descents;
    }
    if (words != expected || sum != 24) {
      ok = false;
      c.detail += "S5 list has " + std::to_string(words.size()) + " entries, sum " + std::to_string(sum);
    }
    c.passed = ok;
    if (ok) c.detail = "9 permutations in S5, weight sum 24";
  });
}

Check trace_route(const EnumerationOptions& eo) {
  return guarded(5, "n! trace(M^n) approaches beta_n at N = 64, n = 4..7", kTraceRelError, [&](Check& c) {
    struct Named {
      std::string name;
      WeightScheme scheme;
    };
    const std::vector<Named> schemes{{"123", avoiding({"123"})},
                                     {"213", avoiding({"213"})},
                                     {"321", avoiding({"321"})},
                                     {"double-descent", WeightScheme::double_descent_weighted()}};
    const std::vector<int> grids{16, 32, kGridFine};
    bool ok = true;
    for (const auto& [name, scheme] : schemes) {
      std::vector<std::vector<double>> err(grids.size());
      for (std::size_t g = 0; g < grids.size(); ++g) {
        const auto traces = trace_powers(assemble_operator(scheme, grids[g]), 7, eo.threads);
        for (int n = 4; n <= 7; ++n) {
          const double exact = beta_bruteforce(n, scheme, eo).value();
          err[g].push_back(std::abs(factorial_d(n) * traces[n - 1] - exact) / std::max(1.0, exact));
        }
      }
      for (std::size_t i = 0; i < err.back().size(); ++i) {
        const int n = 4 + static_cast<int>(i);
        c.observed = std::max(c.observed, err.back()[i]);
        if (err.back()[i] > kTraceRelError) {
          ok = false;
          c.detail += name + " n=" + std::to_string(n) + " err " + fmt("%.3g", err.back()[i]) + "; ";
        }
        for (std::size_t g = 1; g < grids.size(); ++g) {
          if (err[g][i] > kMonotoneSlack * err[g - 1][i] + 1e-12) {
            ok = false;
            c.detail += name + " n=" + std::to_string(n) + " error grows at N=" + std::to_string(grids[g]) + "; ";
          }
        }
      }
    }
    c.passed = ok;
    if (ok) c.detail = "worst relative error at N=64 " + fmt("%.3g", c.observed) + ", non-increasing in N";
  });
}

Check eigenvalues(const EnumerationOptions&) {
  return guarded(6, "top-4 eigenvalues for 123 and the double-descent Perron value at N = 64", kEigenError,
                 [&](Check& c) {
                   const auto spec = full_spectrum(assemble_operator(avoiding({"123"}), kGridFine), 4);
                   const std::int64_t ks[] = {0, -1, 1, -2};
                   bool ok = true;
                   for (int i = 0; i < 4; ++i) {
                     const double d = std::abs(spec.eigenvalues[i] - std::complex<double>(eigenvalue_123(ks[i]), 0.0));
                     c.observed = std::max(c.observed, d);
                     if (d > kEigenError) {
                       ok = false;
                       c.detail += "k=" + std::to_string(ks[i]) + " off by " + fmt("%.3g", d) + "; ";
                     }
                   }
                   const double t4 = top_eigenvalue(assemble_operator(WeightScheme::double_descent_weighted(), kGridFine), 1e-12);
                   c.observed = std::max(c.observed, std::abs(t4 - 1.0));
                   if (std::abs(t4 - 1.0) > kEigenError) {
                     ok = false;
                     c.detail += "double-descent leading " + fmt("%.6f", t4);
                   }
                   c.passed = ok;
                   if (ok) c.detail = "worst deviation " + fmt("%.3g", c.observed);
                 });
}

Check root_213(const EnumerationOptions& eo) {
  return guarded(7, "213 spectral root against Nystrom and the alpha ratio", kRootAgreement, [&](Check& c) {
    const double lambda = solve_213_spectrum(kRootTol);
    const double residual = std::abs(spectrum_213_residual(lambda));
    const double nystrom = top_eigenvalue(assemble_operator(avoiding({"213"}), kGridFine), 1e-12);
    EnumerationOptions wide = eo;
    wide.n_max = std::max(wide.n_max, 11);
    const auto s = avoiding({"213"});
    const double ratio = alpha_bruteforce(11, s, wide).value() / (11.0 * alpha_bruteforce(10, s, wide).value());
    c.observed = std::max(std::abs(nystrom - lambda), std::abs(ratio - lambda));
    c.passed = residual <= kRootResidual && c.observed <= kRootAgreement;
    c.detail = "lambda " + fmt("%.9f", lambda) + ", residual " + fmt("%.2g", residual) + ", Nystrom " +
               fmt("%.6f", nystrom) + ", ratio " + fmt("%.6f", ratio);
  });
}

Check euler(const EnumerationOptions& eo) {
  return guarded(8, "Euler series equals alternating counts and half of alpha_n(123,321)", 0.0, [&](Check& c) {
    const auto s = avoiding({"123", "321"});
    bool ok = true;
    for (int n = 1; n <= 9; ++n) {
      const auto e = std::llround(euler_series(n, kSeriesTol).value);
      const auto count = static_cast<long long>(alternating_count(n, AlternatingShape::UpDown, eo));
      if (e != count) {
        ok = false;
        c.detail += "E_" + std::to_string(n) + " series " + std::to_string(e) + " vs " + std::to_string(count) + "; ";
      }
      if (n >= 2 && alpha_bruteforce(n, s, eo).integer != static_cast<int128>(2 * e)) {
        ok = false;
        c.detail += "alpha_" + std::to_string(n) + " mismatch; ";
      }
    }
    c.passed = ok;
    if (ok) c.detail = "n = 1..9 exact";
  });
}

Check properties(const EnumerationOptions& eo) {
  return guarded(9, "property suite", 0.0, [&](Check& c) {
    std::vector<std::string> failed;
    int total = 0;
    auto expect = [&](bool cond, const std::string& name) {
      ++total;
      if (!cond) failed.push_back(name);
    };

    std::mt19937_64 rng(20240601);
    const auto t4 = WeightScheme::double_descent_weighted();
    const auto a123 = avoiding({"123"}), a321 = avoiding({"321"}), a213 = avoiding({"213"});
    bool rotation = true, complement_ok = true, windows = true;
    for (int trial = 0; trial < 400; ++trial) {
      std::vector<int> e(3 + trial % 10);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<int>(i) + 1;
      std::shuffle(e.begin(), e.end(), rng);
      const Permutation pi(e);
      const int r = 1 + trial % (pi.size() - 1);
      rotation &= cyclic_weight(rotate(pi, r), t4) == cyclic_weight(pi, t4);
      rotation &= cyclic_weight(rotate(pi, r), a213) == cyclic_weight(pi, a213);
      complement_ok &= cyclic_weight(complement(pi), a123) == cyclic_weight(pi, a321);
      int descending = 0;
      for (const auto& w : cyclic_windows(pi, 3)) descending += w.word() == "321";
      windows &= double_descents(pi, Reading::Cyclic) == descending;
    }
    expect(rotation, "rotation invariance");
    expect(complement_ok, "complement symmetry");
    expect(windows, "double descents count 321 windows");

    bool odd = true;
    for (int n = 3; n <= 11; n += 2) odd &= beta_bruteforce(n, avoiding({"123", "321"}), eo).integer == 0;
    expect(odd, "odd cycles avoid 123 and 321 never");

    bool mono = true;
    for (int n = 3; n <= 9; ++n) mono &= beta_bruteforce(n, a123, eo).integer == beta_bruteforce(n, a321, eo).integer;
    expect(mono, "beta(123) = beta(321)");

    bool mc = true;
    for (const auto& [scheme, n, seed] : {std::tuple{a123, 6, 11ULL}, std::tuple{t4, 7, 12ULL}, std::tuple{a213, 8, 13ULL}}) {
      const auto est = beta_montecarlo(n, scheme, 400'000, seed, eo.threads);
      const double exact = beta_bruteforce(n, scheme, eo).value() / factorial_d(n);
      mc &= std::abs(est.mean - exact) <= kMonteCarloSigmas * est.std_error;
    }
    expect(mc, "Monte Carlo within 5 sigma");

    const auto small = assemble_operator(a213, 8);
    const auto spec = full_spectrum(small, 0);
    const auto traces = trace_powers(small, 9, eo.threads);
    bool consistent = true;
    for (int n = 3; n <= 9; ++n) consistent &= std::abs(power_sum(spec, n) - traces[n - 1]) <= kTraceEigenConsistency;
    const double perron = top_eigenvalue(small, 1e-13);
    consistent &= std::abs(perron - spec.eigenvalues[0].real()) <= 1e-6 * perron;
    expect(consistent, "trace and eigenvalue routes agree");

    const auto text = t4.to_json();
    expect(WeightScheme::from_json(text).to_json() == text, "scheme JSON round-trip");
    RunConfig rc;
    rc.command = Command::Series;
    rc.which = SeriesKind::Beta123;
    rc.n = NRange{3, 6};
    rc.tol = 1e-6;
    rc.format = Format::Json;
    const auto report = run(rc).report;
    expect(nlohmann::ordered_json::parse(report).dump(2) + "\n" == report && run(rc).report == report,
           "report JSON round-trip");

    c.observed = static_cast<double>(failed.size());
    c.passed = failed.empty();
    c.detail = std::to_string(total - static_cast<int>(failed.size())) + "/" + std::to_string(total) + " hold";
    for (const auto& f : failed) c.detail += "; failed: " + f;
  });
}

}  // namespace

std::vector<Check> run_acceptance_checks(const VerifyOptions& options) {
  EnumerationOptions eo;
  eo.threads = options.threads;
  std::vector<Check> out;
  out.push_back(series_vs_bruteforce(eo));
  out.push_back(second_power());
  out.push_back(double_descent_identity(eo));
  out.push_back(corollary(eo));
  out.push_back(trace_route(eo));
  out.push_back(eigenvalues(eo));
  out.push_back(root_213(eo));
  out.push_back(euler(eo));
  out.push_back(properties(eo));
  return out;
}

}  // namespace cycavoid::cli
