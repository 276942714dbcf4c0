#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cycavoid/enumerate.hpp"
#include "cycavoid/error.hpp"
#include "cycavoid/series.hpp"
#include "cycavoid/spectral.hpp"
#include "verify.hpp"

namespace cycavoid::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shortest round-trip text, the same digits the JSON report carries.
std::string shortest(double v) { return ordered_json(v).dump(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// Column-aligned text table; the first row is the header.
class Table {
 public:
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render(const std::string& title) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::string out = "# " + title + "\n";
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) line += "  ";
        line += r[i];
        if (i + 1 < r.size()) line.append(width[i] - r[i].size(), ' ');
      }
      out += line + "\n";
    }
    return out;
  }

  std::string csv() const {
    std::string out;
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_escape(r[i]);
      out += "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string render_json(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read weight file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightScheme load_scheme(const RunConfig& c) {
  if (c.avoid && c.weights_path) throw UsageError("--avoid and --weights are mutually exclusive");
  if (c.avoid) return WeightScheme::from_forbidden_words(split_pattern_list(*c.avoid));
  if (c.weights_path) return WeightScheme::from_json(read_file(*c.weights_path));
  throw UsageError("a scheme is required: pass --avoid or --weights");
}

NRange require_range(const RunConfig& c) {
  if (!c.n) throw UsageError("--n is required");
  if (c.n->lo < 1 || c.n->lo > c.n->hi) {
    throw Error(ErrorCode::OutOfDomain, "--n range must satisfy 1 <= lo <= hi");
  }
  return *c.n;
}

ordered_json scheme_json(const WeightScheme& s) {
  ordered_json j;
  j["label"] = s.label();
  j["digest"] = s.digest();
  j["window"] = s.window();
  return j;
}

ordered_json exact_value(const EnumerationResult& r) {
  if (!r.exact) return r.real;
  if (r.integer >= std::numeric_limits<std::int64_t>::min() && r.integer <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(r.integer);
  }
  return to_string(r.integer);
}

std::string text_value(const EnumerationResult& r) { return r.exact ? to_string(r.integer) : sig6(r.real); }

std::string run_sums(const RunConfig& c, Mode mode) {
  const auto scheme = load_scheme(c);
  const auto range = require_range(c);
  EnumerationOptions eo;
  eo.n_max = c.n_max;
  eo.threads = c.threads;
  std::vector<EnumerationResult> results;
  for (int n = range.lo; n <= range.hi; ++n) {
    results.push_back(mode == Mode::Linear ? alpha_bruteforce(n, scheme, eo) : beta_bruteforce(n, scheme, eo));
  }

  const std::string cmd = mode == Mode::Linear ? "enumerate" : "cyclic";
  if (c.format == Format::Json) {
    ordered_json doc;
    doc["command"] = cmd;
    doc["scheme"] = scheme_json(scheme);
    doc["n_max"] = c.n_max;
    doc["records"] = ordered_json::array();
    for (const auto& r : results) {
      ordered_json rec;
      rec["n"] = r.n;
      rec["mode"] = std::string(to_string(r.mode));
      rec["scheme"] = r.scheme_digest;
      rec["value"] = exact_value(r);
      rec["exact"] = r.exact;
      doc["records"].push_back(rec);
    }
    return render_json(doc);
  }
  Table t;
  if (c.format == Format::Csv) {
    t.add({"n", "mode", "scheme", "value", "exact"});
    for (const auto& r : results) {
      t.add({std::to_string(r.n), std::string(to_string(r.mode)), r.scheme_digest,
             r.exact ? to_string(r.integer) : shortest(r.real), r.exact ? "true" : "false"});
    }
    return t.csv();
  }
  t.add({"n", mode == Mode::Linear ? "alpha_n" : "beta_n", "exact"});
  for (const auto& r : results) t.add({std::to_string(r.n), text_value(r), r.exact ? "yes" : "no"});
  return t.render(cmd + " sums, scheme " + scheme.label() + " (" + scheme.digest() + ")");
}

std::string run_spectrum(const RunConfig& c) {
  const auto scheme = load_scheme(c);
  GridOptions go;
  go.rule = c.tie_rule;
  const auto op = assemble_operator(scheme, c.resolution, go);
  const auto spec = full_spectrum(op, c.top_k);
  std::map<int, double> traces;
  if (c.traces) {
    if (c.traces->lo < scheme.window() || c.traces->lo > c.traces->hi) {
      throw Error(ErrorCode::TooShort, "--traces range must satisfy m + 1 <= lo <= hi");
    }
    const auto all = trace_powers(op, c.traces->hi, c.threads);
    for (int n = c.traces->lo; n <= c.traces->hi; ++n) traces[n] = all[n - 1];
  }

  if (c.format == Format::Json) {
    ordered_json doc;
    doc["command"] = "spectrum";
    doc["scheme"] = spec.scheme_digest;
    doc["label"] = scheme.label();
    doc["N"] = spec.resolution;
    doc["tie_rule"] = std::string(to_string(c.tie_rule));
    doc["dimension"] = spec.dimension;
    doc["complete"] = spec.complete;
    doc["eigenvalues"] = ordered_json::array();
    for (const auto& z : spec.eigenvalues) doc["eigenvalues"].push_back({z.real(), z.imag()});
    doc["traces"] = ordered_json::object();
    for (const auto& [n, v] : traces) doc["traces"][std::to_string(n)] = v;
    return render_json(doc);
  }
  Table t;
  if (c.format == Format::Csv) {
    t.add({"kind", "index", "real", "imag"});
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      t.add({"eigenvalue", std::to_string(i + 1), shortest(spec.eigenvalues[i].real()),
             shortest(spec.eigenvalues[i].imag())});
    }
    for (const auto& [n, v] : traces) t.add({"trace", std::to_string(n), shortest(v), "0"});
    return t.csv();
  }
  t.add({"k", "re", "im", "|lambda|"});
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const auto z = spec.eigenvalues[i];
    t.add({std::to_string(i + 1), sig6(z.real()), sig6(z.imag()), sig6(std::abs(z))});
  }
  std::string out = t.render("spectrum, scheme " + scheme.label() + " (" + spec.scheme_digest + "), N = " +
                             std::to_string(spec.resolution) + ", " + std::string(to_string(c.tie_rule)) +
                             " ties, dimension " + std::to_string(spec.dimension));
  if (!traces.empty()) {
    Table tt;
    tt.add({"n", "trace(M^n)", "n! trace"});
    for (const auto& [n, v] : traces) tt.add({std::to_string(n), sig6(v), sig6(v * static_cast<double>(factorial(n)))});
    out += tt.render("traces");
  }
  return out;
}

std::string run_series(const RunConfig& c) {
  const auto range = require_range(c);
  std::vector<SeriesValue> values;
  for (int n = range.lo; n <= range.hi; ++n) {
    values.push_back(c.which == SeriesKind::Beta123 ? series_beta_123(n, c.tol) : euler_series(n, c.tol));
  }
  const std::string which = c.which == SeriesKind::Beta123 ? "beta123" : "euler";
  if (c.format == Format::Json) {
    ordered_json doc;
    doc["command"] = "series";
    doc["which"] = which;
    doc["tol"] = c.tol;
    doc["records"] = ordered_json::array();
    for (const auto& v : values) {
      ordered_json rec;
      rec["n"] = v.n;
      rec["value"] = v.value;
      rec["terms_used"] = v.terms_used;
      rec["tail_bound"] = v.tail_bound;
      rec["converged"] = v.converged;
      doc["records"].push_back(rec);
    }
    return render_json(doc);
  }
  Table t;
  if (c.format == Format::Csv) {
    t.add({"n", "value", "terms_used", "tail_bound", "converged"});
    for (const auto& v : values) {
      t.add({std::to_string(v.n), shortest(v.value), std::to_string(v.terms_used), shortest(v.tail_bound),
             v.converged ? "true" : "false"});
    }
    return t.csv();
  }
  t.add({"n", "value", "nearest", "terms", "tail bound", "converged"});
  for (const auto& v : values) {
    t.add({std::to_string(v.n), sig6(v.value), std::to_string(std::llround(v.value)), std::to_string(v.terms_used),
           sig6(v.tail_bound), v.converged ? "yes" : "no"});
  }
  return t.render(which + " series, tol " + sig6(c.tol));
}

std::string run_montecarlo(const RunConfig& c) {
  const auto scheme = load_scheme(c);
  const auto range = require_range(c);
  if (c.samples < 1) throw Error(ErrorCode::OutOfDomain, "--samples must be >= 1");
  std::vector<MCEstimate> est;
  for (int n = range.lo; n <= range.hi; ++n) est.push_back(beta_montecarlo(n, scheme, c.samples, c.seed, c.threads));

  if (c.format == Format::Json) {
    ordered_json doc;
    doc["command"] = "montecarlo";
    doc["scheme"] = scheme_json(scheme);
    doc["seed"] = c.seed;
    doc["samples"] = c.samples;
    doc["records"] = ordered_json::array();
    for (std::size_t i = 0; i < est.size(); ++i) {
      ordered_json rec;
      rec["n"] = range.lo + static_cast<int>(i);
      rec["mean"] = est[i].mean;
      rec["std_error"] = est[i].std_error;
      doc["records"].push_back(rec);
    }
    return render_json(doc);
  }
  Table t;
  if (c.format == Format::Csv) {
    t.add({"n", "mean", "std_error", "samples", "seed"});
    for (std::size_t i = 0; i < est.size(); ++i) {
      t.add({std::to_string(range.lo + static_cast<int>(i)), shortest(est[i].mean), shortest(est[i].std_error),
             std::to_string(est[i].samples), std::to_string(est[i].seed)});
    }
    return t.csv();
  }
  t.add({"n", "beta_n/n!", "std error", "n! mean"});
  for (std::size_t i = 0; i < est.size(); ++i) {
    const int n = range.lo + static_cast<int>(i);
    t.add({std::to_string(n), sig6(est[i].mean), sig6(est[i].std_error), sig6(est[i].mean * static_cast<double>(factorial(n)))});
  }
  return t.render("montecarlo, scheme " + scheme.label() + " (" + scheme.digest() + "), " + std::to_string(c.samples) +
                  " samples, seed " + std::to_string(c.seed));
}

RunResult run_verify(const RunConfig& c) {
  VerifyOptions vo;
  vo.threads = c.threads;
  const auto checks = run_acceptance_checks(vo);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.passed; });
  RunResult result;
  result.exit_code = all ? exit_code::kOk : exit_code::kVerification;
  if (!all) result.diagnostic = "verification failed";

  if (c.format == Format::Json) {
    ordered_json doc;
    doc["command"] = "verify";
    doc["passed"] = all;
    doc["checks"] = ordered_json::array();
    for (const auto& k : checks) {
      ordered_json rec;
      rec["id"] = k.id;
      rec["name"] = k.name;
      rec["passed"] = k.passed;
      rec["observed"] = k.observed;
      rec["tolerance"] = k.tolerance;
      rec["detail"] = k.detail;
      doc["checks"].push_back(rec);
    }
    result.report = render_json(doc);
    return result;
  }
  Table t;
  if (c.format == Format::Csv) {
    t.add({"id", "name", "passed", "observed", "tolerance", "detail"});
    for (const auto& k : checks) {
      t.add({std::to_string(k.id), k.name, k.passed ? "true" : "false", shortest(k.observed), shortest(k.tolerance), k.detail});
    }
    result.report = t.csv();
    return result;
  }
  t.add({"", "#", "check", "observed", "tolerance", "detail"});
  for (const auto& k : checks) {
    t.add({k.passed ? "PASS" : "FAIL", std::to_string(k.id), k.name, sig6(k.observed), sig6(k.tolerance), k.detail});
  }
  result.report = t.render(all ? "verify: all checks passed" : "verify: FAILURES");
  return result;
}

}  // namespace

std::optional<NRange> parse_range(const std::string& text) {
  auto parse_int = [](const std::string& s, int& out) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      return false;
    }
    out = std::stoi(s);
    return true;
  };
  NRange r;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    if (!parse_int(text, r.lo)) return std::nullopt;
    r.hi = r.lo;
    return r;
  }
  if (!parse_int(text.substr(0, dots), r.lo) || !parse_int(text.substr(dots + 2), r.hi)) return std::nullopt;
  return r;
}

std::variant<RunConfig, RunResult> parse_command_line(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Consecutive pattern avoidance: exact sums, operator spectra and series", "cycavoid"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string format = "table";
  std::string output;
  app.add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--output", output, "write the report to this file instead of stdout");
  app.add_option("--threads", c.threads, "worker threads (default CYCAVOID_THREADS, then all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string avoid, weights, n_text, traces_text, rule = "refined", which = "beta123";
  auto add_scheme = [&](CLI::App* sub) {
    auto* a = sub->add_option("--avoid", avoid, "comma-separated forbidden patterns, e.g. 123,321");
    auto* w = sub->add_option("--weights", weights, "JSON weight file");
    a->excludes(w);
  };
  auto add_n = [&](CLI::App* sub, const char* help) { sub->add_option("--n", n_text, help); };

  auto* en = app.add_subcommand("enumerate", "linear weighted sums alpha_n by exhaustive enumeration");
  auto* cy = app.add_subcommand("cyclic", "cyclic weighted sums beta_n by exhaustive enumeration");
  for (auto* sub : {en, cy}) {
    add_scheme(sub);
    add_n(sub, "length or range lo..hi");
    sub->add_option("--nmax", c.n_max, "largest length enumeration accepts")->check(CLI::Range(1, 20));
  }

  auto* sp = app.add_subcommand("spectrum", "eigenvalues and traces of the discretized transfer operator");
  add_scheme(sp);
  sp->add_option("--N", c.resolution, "grid cells per coordinate");
  sp->add_option("--top-k", c.top_k, "eigenvalues of largest modulus to report, 0 for all");
  sp->add_option("--traces", traces_text, "trace(M^n) for n in lo..hi");
  sp->add_option("--tie-rule", rule, "refined or positional")->check(CLI::IsMember({"refined", "positional"}));

  auto* se = app.add_subcommand("series", "eigenvalue series with tail control");
  se->add_option("--which", which, "beta123 or euler")->check(CLI::IsMember({"beta123", "euler"}));
  add_n(se, "length or range lo..hi");
  se->add_option("--tol", c.tol, "bound on the discarded tail");

  auto* mc = app.add_subcommand("montecarlo", "Monte-Carlo estimate of beta_n / n!");
  add_scheme(mc);
  add_n(mc, "length or range lo..hi");
  mc->add_option("--samples", c.samples, "number of sample points");
  mc->add_option("--seed", c.seed, "64-bit seed");

  auto* ve = app.add_subcommand("verify", "run the full cross-check battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    return RunResult{exit_code::kOk, app.help(), ""};
  } catch (const CLI::CallForAllHelp&) {
    return RunResult{exit_code::kOk, app.help("", CLI::AppFormatMode::All), ""};
  } catch (const CLI::ParseError& e) {
    return RunResult{exit_code::kUsage, "", e.what()};
  }

  if (en->parsed()) c.command = Command::Enumerate;
  if (cy->parsed()) c.command = Command::Cyclic;
  if (sp->parsed()) c.command = Command::Spectrum;
  if (se->parsed()) c.command = Command::Series;
  if (mc->parsed()) c.command = Command::MonteCarlo;
  if (ve->parsed()) c.command = Command::Verify;

  c.format = format == "json" ? Format::Json : (format == "csv" ? Format::Csv : Format::Table);
  if (!output.empty()) c.output_path = output;
  if (!avoid.empty()) c.avoid = avoid;
  if (!weights.empty()) c.weights_path = weights;
  if (!n_text.empty()) {
    c.n = parse_range(n_text);
    if (!c.n) return RunResult{exit_code::kUsage, "", "--n expects an integer or lo..hi, got \"" + n_text + "\""};
  }
  if (!traces_text.empty()) {
    c.traces = parse_range(traces_text);
    if (!c.traces) return RunResult{exit_code::kUsage, "", "--traces expects lo..hi, got \"" + traces_text + "\""};
  }
  c.tie_rule = rule == "positional" ? TieRule::Positional : TieRule::Refined;
  c.which = which == "euler" ? SeriesKind::Euler : SeriesKind::Beta123;
  return c;
}

RunResult run(const RunConfig& config) {
  try {
    switch (config.command) {
      case Command::Enumerate:
        return {exit_code::kOk, run_sums(config, Mode::Linear), ""};
      case Command::Cyclic:
        return {exit_code::kOk, run_sums(config, Mode::Cyclic), ""};
      case Command::Spectrum:
        return {exit_code::kOk, run_spectrum(config), ""};
      case Command::Series:
        return {exit_code::kOk, run_series(config), ""};
      case Command::MonteCarlo:
        return {exit_code::kOk, run_montecarlo(config), ""};
      case Command::Verify:
        return run_verify(config);
    }
    return {exit_code::kUsage, "", "unknown command"};
  } catch (const UsageError& e) {
    return {exit_code::kUsage, "", e.what()};
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::InvalidPattern || e.code() == ErrorCode::InvalidScheme;
    return {usage ? exit_code::kUsage : exit_code::kDomain, "", e.what()};
  } catch (const std::exception& e) {
    return {exit_code::kDomain, "", e.what()};
  }
}

}  // namespace cycavoid::cli
