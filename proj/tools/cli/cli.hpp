#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "cycavoid/spectral.hpp"

namespace cycavoid::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDomain = 2;
inline constexpr int kVerification = 3;
}  // namespace exit_code

enum class Command { Enumerate, Cyclic, Spectrum, Series, MonteCarlo, Verify };
enum class Format { Table, Json, Csv };
enum class SeriesKind { Beta123, Euler };

/// Inclusive range of lengths; "5" parses as 5..5.
struct NRange {
  int lo = 0;
  int hi = 0;
};

std::optional<NRange> parse_range(const std::string& text);

struct RunConfig {
  Command command = Command::Verify;
  /// Comma-separated forbidden patterns, exclusive with `weights_path`.
  std::optional<std::string> avoid;
  std::optional<std::string> weights_path;
  std::optional<NRange> n;
  int n_max = 11;
  int resolution = 32;
  std::size_t top_k = 8;
  std::optional<NRange> traces;
  TieRule tie_rule = TieRule::Refined;
  SeriesKind which = SeriesKind::Beta123;
  double tol = 1e-9;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  Format format = Format::Table;
  std::optional<std::string> output_path;
  /// 0 defers to CYCAVOID_THREADS, then the hardware concurrency.
  int threads = 0;
};

struct RunResult {
  int exit_code = exit_code::kOk;
  std::string report;
  /// One line for stderr when `exit_code` is nonzero.
  std::string diagnostic;
};

/// Usage errors and --help come back as a RunResult.
std::variant<RunConfig, RunResult> parse_command_line(int argc, const char* const* argv);

/// Dispatches to the library and renders the report. Never throws.
RunResult run(const RunConfig& config);

}  // namespace cycavoid::cli
