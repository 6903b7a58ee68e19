#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace plab::app {

enum ExitCode : int { kOk = 0, kViolation = 1, kConfigError = 2, kNumericalFailure = 3 };

struct RunOptions {
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::filesystem::path> out_dir;
  int workers = 0;
  bool emit_plot_data = false;
};

int cmd_verify_phi(const ExperimentConfig& config, const RunOptions& run, std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, const RunOptions& run, std::ostream& out);
int cmd_absorb(const ExperimentConfig& config, const RunOptions& run, std::ostream& out);
int cmd_pullback(const ExperimentConfig& config, const RunOptions& run, std::ostream& out);
int cmd_tails(const ExperimentConfig& config, const RunOptions& run, std::ostream& out);
int cmd_ou_diag(const ExperimentConfig& config, const RunOptions& run, std::ostream& out);

/// Parses argv-style arguments (without the program name), runs the
/// subcommand and returns its exit code. Errors go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plab::app
