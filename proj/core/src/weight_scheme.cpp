#include "cycavoid/weight_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "cycavoid/error.hpp"

namespace cycavoid {

namespace {

using ordered_json = nlohmann::ordered_json;

bool integral(double w) {
  return std::isfinite(w) && std::nearbyint(w) == w && std::fabs(w) <= 2147483647.0;
}

// The most frequent value; ties go to the smaller one so output is canonical.
double mode_of(std::span<const double> table) {
  std::map<double, int> counts;
  for (double w : table) ++counts[w];
  double best = table.front();
  int best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

void read_table(const ordered_json& obj, int length, std::vector<double>& table,
                const char* field) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::InvalidScheme, std::string("\"") + field + "\" must be an object");
  }
  for (const auto& [word, value] : obj.items()) {
    Permutation p = Permutation::parse(word);
    if (p.size() != length) {
      throw Error(ErrorCode::InvalidScheme, std::string("pattern \"") + word + "\" in \"" +
                                                field + "\" must have length " +
                                                std::to_string(length));
    }
    if (!value.is_number()) {
      throw Error(ErrorCode::InvalidScheme, std::string("weight of \"") + word + "\" is not a number");
    }
    table[pattern_rank(p)] = value.get<double>();
  }
}

ordered_json write_table(std::span<const double> table, int length, double baseline) {
  ordered_json obj = ordered_json::object();
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r] != baseline) obj[pattern_unrank(r, length).word()] = table[r];
  }
  return obj;
}

}  // namespace

WeightScheme::WeightScheme(int window, double fill) : window_(window) {
  if (window < 2 || window > kMaxWindow) {
    throw Error(ErrorCode::InvalidScheme,
                "window must be in 2.." + std::to_string(kMaxWindow) + ", got " + std::to_string(window));
  }
  if (!std::isfinite(fill)) throw Error(ErrorCode::InvalidScheme, "weights must be finite");
  wt_.assign(factorial(window), fill);
  wt1_.assign(factorial(window - 1), 1.0);
  wt2_.assign(factorial(window - 1), 1.0);
}

WeightScheme WeightScheme::from_forbidden_set(int window, std::span<const Permutation> forbidden) {
  WeightScheme s(window, 1.0);
  std::vector<std::string> words;
  for (const auto& p : forbidden) {
    s.set_wt(p, 0.0);
    words.push_back(p.word());
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  std::string label = "avoid{";
  for (std::size_t i = 0; i < words.size(); ++i) label += (i ? "," : "") + words[i];
  s.label_ = label + "}";
  return s;
}

WeightScheme WeightScheme::from_forbidden_words(std::span<const std::string> words) {
  if (words.empty()) throw Error(ErrorCode::InvalidPattern, "empty pattern list needs an explicit window");
  std::vector<Permutation> patterns;
  for (const auto& w : words) patterns.push_back(Permutation::parse(w));
  const int window = patterns.front().size();
  for (const auto& p : patterns) {
    if (p.size() != window) {
      throw Error(ErrorCode::InvalidPattern, "patterns \"" + patterns.front().word() + "\" and \"" +
                                                 p.word() + "\" differ in length");
    }
  }
  return from_forbidden_set(window, patterns);
}

WeightScheme WeightScheme::double_descent_weighted() {
  WeightScheme s(3, 1.0);
  s.set_wt(Permutation{1, 2, 3}, 0.0);
  s.set_wt(Permutation{3, 2, 1}, 2.0);
  s.label_ = "double-descent";
  return s;
}

WeightScheme WeightScheme::from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidScheme, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("window") || !doc["window"].is_number_integer()) {
    throw Error(ErrorCode::InvalidScheme, "weight file needs an integer \"window\"");
  }
  const double fill = doc.contains("default") ? doc["default"].get<double>() : 1.0;
  WeightScheme s(doc["window"].get<int>(), fill);
  if (doc.contains("wt")) read_table(doc["wt"], s.window_, s.wt_, "wt");
  if (doc.contains("wt1")) read_table(doc["wt1"], s.window_ - 1, s.wt1_, "wt1");
  if (doc.contains("wt2")) read_table(doc["wt2"], s.window_ - 1, s.wt2_, "wt2");
  for (const auto* t : {&s.wt_, &s.wt1_, &s.wt2_}) {
    for (double w : *t) {
      if (!std::isfinite(w)) throw Error(ErrorCode::InvalidScheme, "weights must be finite");
    }
  }
  s.label_ = doc.contains("label") && doc["label"].is_string() ? doc["label"].get<std::string>()
                                                                : "weights";
  return s;
}

std::string WeightScheme::to_json() const {
  const double fill = mode_of(wt_);
  ordered_json doc;
  doc["window"] = window_;
  doc["default"] = fill;
  doc["wt"] = write_table(wt_, window_, fill);
  if (!std::all_of(wt1_.begin(), wt1_.end(), [](double w) { return w == 1.0; })) {
    doc["wt1"] = write_table(wt1_, window_ - 1, 1.0);
  }
  if (!std::all_of(wt2_.begin(), wt2_.end(), [](double w) { return w == 1.0; })) {
    doc["wt2"] = write_table(wt2_, window_ - 1, 1.0);
  }
  return doc.dump();
}

void WeightScheme::check_pattern(const Permutation& pattern, int length) const {
  if (pattern.size() != length) {
    throw Error(ErrorCode::InvalidPattern, "pattern \"" + pattern.word() + "\" must have length " +
                                               std::to_string(length));
  }
}

double WeightScheme::wt(const Permutation& p) const {
  check_pattern(p, window_);
  return wt_[pattern_rank(p)];
}
double WeightScheme::wt1(const Permutation& p) const {
  check_pattern(p, window_ - 1);
  return wt1_[pattern_rank(p)];
}
double WeightScheme::wt2(const Permutation& p) const {
  check_pattern(p, window_ - 1);
  return wt2_[pattern_rank(p)];
}

void WeightScheme::set_wt(const Permutation& p, double value) {
  check_pattern(p, window_);
  wt_[pattern_rank(p)] = value;
}
void WeightScheme::set_wt1(const Permutation& p, double value) {
  check_pattern(p, window_ - 1);
  wt1_[pattern_rank(p)] = value;
}
void WeightScheme::set_wt2(const Permutation& p, double value) {
  check_pattern(p, window_ - 1);
  wt2_[pattern_rank(p)] = value;
}

bool WeightScheme::is_integral() const noexcept {
  auto ok = [](const std::vector<double>& t) { return std::all_of(t.begin(), t.end(), integral); };
  return ok(wt_) && ok(wt1_) && ok(wt2_);
}

bool WeightScheme::is_nonnegative() const noexcept {
  auto ok = [](const std::vector<double>& t) {
    return std::all_of(t.begin(), t.end(), [](double w) { return w >= 0.0; });
  };
  return ok(wt_) && ok(wt1_) && ok(wt2_);
}

bool WeightScheme::has_unit_boundaries() const noexcept {
  auto unit = [](const std::vector<double>& t) {
    return std::all_of(t.begin(), t.end(), [](double w) { return w == 1.0; });
  };
  return unit(wt1_) && unit(wt2_);
}

std::string WeightScheme::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> split_pattern_list(std::string_view list) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto end = comma == std::string_view::npos ? list.size() : comma;
    std::string word(list.substr(start, end - start));
    if (word.empty()) throw Error(ErrorCode::InvalidPattern, "empty pattern in list \"" + std::string(list) + "\"");
    Permutation::parse(word);
    words.push_back(std::move(word));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return words;
}

}  // namespace cycavoid
