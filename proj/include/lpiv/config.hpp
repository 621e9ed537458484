#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lpiv/splitfilters.hpp"

namespace lpiv {

/// One Monte Carlo experiment. Defaults reproduce the forced-Lorenz study:
/// n = 1e5 samples at h = 1e-3, split windows of N = 100 points, p = 75,
/// lambda = 1, mu = 200, 2000 trials, eta = 0.1 (continuous) or 1 (discrete).
struct ExperimentConfig {
  std::string name = "continuous";
  Mode mode = Mode::continuous;
  long n = 100000;
  double h = 1e-3;
  int N = 100;
  int p = 75;
  int fallback_p = 8;  // used when p cannot be built at the solve tolerance
  double eta = 0.1;
  double lambda = 1.0;
  double mu = 200.0;
  int trials = 2000;
  std::uint64_t master_seed = 2024;
  int stride = 2;  // even offsets only: every window sees the same filter phase
  int substeps = 10;
  double forcing_freq = 1.0;
  std::array<double, 3> x0{-8.0, 8.0, 27.0};
  int bootstrap = 1000;
  int kde_grid = 256;

  static ExperimentConfig defaults(Mode mode);
  /// Throws Error(config) naming the first offending field.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);

/// Overlays `j` on the defaults of its mode (or `mode_override`). Unknown
/// keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  std::optional<Mode> mode_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Mode> mode_override = std::nullopt);

/// Applies a `key=value` override; the value is parsed as JSON when it can
/// be, otherwise taken as a string.
void apply_override(ExperimentConfig& config, std::string_view assignment);

}  // namespace lpiv
