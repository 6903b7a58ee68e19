#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plab/attractor.hpp"
#include "plab/errors.hpp"
#include "plab/io.hpp"
#include "plab/nonlinearity.hpp"

namespace plab::app {

using io::json;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Fully resolved run configuration. See README for the schema.
struct ExperimentConfig {
  ModelParams params;
  json g_spec = "zero";
  json a_spec = "zero";
  json phi_spec;

  std::vector<std::uint64_t> seeds{1};
  double dt = 0.01;
  double radius_horizon = 50.0;
  IntegratorOptions integrator;
  BallSampleSpec samples;

  // simulate
  double T = 10.0;
  double checkpoint_spacing = 0.1;
  json v0_spec = "zero";
  LatticeVector v0;
  std::vector<int> tail_sites;
  bool snapshots = false;

  // absorb / pullback / tails
  std::vector<double> pullback_times{1.0, 2.0, 5.0, 10.0};
  double ball_radius = 10.0;
  std::vector<double> gammas;
  std::vector<double> temper_times{1.0, 10.0, 100.0};
  double inner_radius = 1.0;
  double outer_radius = 10.0;
  double epsilon = 1e-3;
  int cutoff_width = 0;

  // ou-diag
  double ou_span = 1000.0;
  double threshold = 0.05;

  // verify-phi
  std::optional<double> c1, c2, k;
  double a_bound = 0.0;
  GrowthGrid growth;
  PairGrid pairs;

  std::filesystem::path out_dir = "plab_out";

  ExperimentSetup setup() const;
  /// Every setting with defaults filled in; parses back to the same config.
  json resolved() const;
};

/// Parses and validates a JSON config. Relative CSV paths resolve against base_dir.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Site profile: inline array, {"values": [...]}, a named profile
/// ({"profile": "gaussian-bump", ...} or just the name), or a CSV file
/// ({"csv": path} or a string ending in .csv).
LatticeVector resolve_profile(const json& spec, int half_width, const std::filesystem::path& base_dir,
                              const std::string& where);

}  // namespace plab::app
