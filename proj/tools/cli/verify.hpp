#pragma once

#include <string>
#include <vector>

namespace cycavoid::cli {

struct Check {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Worst observed deviation and the bound it was held to.
  double observed = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  int threads = 0;
};

/// One entry per acceptance criterion, in order 1..9.
std::vector<Check> run_acceptance_checks(const VerifyOptions& options = {});

}  // namespace cycavoid::cli
