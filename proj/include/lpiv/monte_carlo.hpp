#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lpiv/config.hpp"
#include "lpiv/dynamics.hpp"
#include "lpiv/estimator.hpp"
#include "lpiv/splitfilters.hpp"

namespace lpiv {

enum class ReferenceKind { ground_truth, pseudo_true };
std::string_view to_string(ReferenceKind kind);

enum class Execution { serial, parallel };

/// Artifacts shared by every trial of an experiment. Built once, immutable.
struct ExperimentContext {
  ExperimentConfig config;  // config.p is the order actually used
  int requested_p = 0;
  Trajectory clean;
  SplitFilterBank bank;
  FeatureMap features;
  Eigen::MatrixXd reference;
  ReferenceKind reference_kind = ReferenceKind::ground_truth;
  Eigen::Index regression_rows = 0;
  std::vector<std::string> warnings;
};

/// Integrates the noiseless trajectory, builds the split bank (falling back
/// to config.fallback_p with a warning if p fails to build) and computes the
/// reference: the true parameter in continuous mode, the zero-noise least
/// squares fit in discrete mode.
ExperimentContext prepare_experiment(const ExperimentConfig& config);

struct TrialResult {
  int trial_index = 0;
  bool ok = false;
  std::string error;  // set when !ok
  Eigen::MatrixXd theta_iv;
  Eigen::MatrixXd theta_ls;
  Excitation iv_excitation;
  int iv_clipped = 0;
  double ls_sigma_min = 0.0;  // sigma_min(XᵀX)
};

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

/// Fresh noise for (master_seed, trial_index), then both estimators. Errors
/// are recorded in the result instead of thrown.
TrialResult run_trial(const ExperimentContext& context, int trial_index);

/// All configured trials, sorted by trial index. Per-trial output does not
/// depend on `execution`.
std::vector<TrialResult> run_monte_carlo(const ExperimentContext& context,
                                         Execution execution = Execution::parallel);

}  // namespace lpiv
