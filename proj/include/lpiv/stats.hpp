#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lpiv/estimator.hpp"
#include "lpiv/monte_carlo.hpp"

namespace lpiv {

/// Percentages of the reference's Frobenius norm:
///   bias = ‖mean - ref‖_F
///   std  = sqrt(mean_t ‖theta_t - mean‖_F^2)
///   rmse = sqrt(mean_t ‖theta_t - ref‖_F^2)
/// so bias^2 + std^2 = rmse^2.
struct ErrorStats {
  double bias_pct = 0.0;
  double std_pct = 0.0;
  double rmse_pct = 0.0;
};

/// Throws Error(insufficient_data) for fewer than two estimates.
ErrorStats error_stats(std::span<const Eigen::MatrixXd> thetas, const Eigen::MatrixXd& reference);

/// Nonparametric bootstrap over trials: standard deviation of each statistic
/// across `resamples` resampled sets. Deterministic in `seed`.
ErrorStats bootstrap_se(std::span<const Eigen::MatrixXd> thetas, const Eigen::MatrixXd& reference,
                        int resamples, std::uint64_t seed);

struct EstimatorSummary {
  ErrorStats stats;
  ErrorStats se;
};

struct SummaryStats {
  EstimatorSummary iv;
  EstimatorSummary ls;
  ReferenceKind reference = ReferenceKind::ground_truth;
  double reference_norm = 0.0;
  int trials = 0;    // successful
  int failures = 0;
};

/// Statistics of the successful trials of both estimators, with bootstrap
/// standard errors.
SummaryStats summarize(const std::vector<TrialResult>& results, const Eigen::MatrixXd& reference,
                       ReferenceKind kind, int resamples, std::uint64_t seed);

/// Gaussian kernel density with the normal-reference bandwidth
/// 1.06 min(sd, IQR/1.34) n^(-1/5) on a uniform grid covering mean ± 4 sd
/// and every sample ± 4 bandwidths.
struct Density {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  double mean = 0.0;
};
Density kernel_density(std::span<const double> samples, int grid_points);

struct KdeRow {
  int entry_row = 0;
  int entry_col = 0;
  Method estimator = Method::iv;
  double grid_value = 0.0;
  double density = 0.0;
  double mean = 0.0;
  double reference = 0.0;
};

/// Elementwise marginal densities for every theta entry and both estimators.
/// Needs at least 10 successful trials.
std::vector<KdeRow> kde_export(const std::vector<TrialResult>& results,
                               const Eigen::MatrixXd& reference, int grid_points);

}  // namespace lpiv
