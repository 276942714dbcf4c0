#include <fstream>
#include <iostream>
#include <variant>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace cycavoid::cli;
  const auto parsed = parse_command_line(argc, argv);
  if (const auto* early = std::get_if<RunResult>(&parsed)) {
    if (!early->diagnostic.empty()) std::cerr << "cycavoid: " << early->diagnostic << "\n";
    std::cout << early->report;
    return early->exit_code;
  }
  const auto& config = std::get<RunConfig>(parsed);
  const RunResult result = run(config);
  if (!result.diagnostic.empty()) std::cerr << "cycavoid: " << result.diagnostic << "\n";
  if (result.report.empty()) return result.exit_code;

  if (config.output_path) {
    std::ofstream out(*config.output_path, std::ios::binary);
    out << result.report;
    if (!out) {
      std::cerr << "cycavoid: cannot write \"" << *config.output_path << "\"\n";
      return exit_code::kUsage;
    }
  } else {
    std::cout << result.report;
  }
  return result.exit_code;
}
