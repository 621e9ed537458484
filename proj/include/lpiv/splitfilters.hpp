#pragma once

#include <functional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "lpiv/polyfilter.hpp"

namespace lpiv {

enum class Mode { continuous, discrete };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// The response operator: a left shift (discrete-time model) or a time
/// derivative (continuous-time model) of the given order.
struct OperatorKind {
  enum class Tag { shift, derivative };
  Tag tag = Tag::derivative;
  int order = 1;
};

/// Hat filters read the even-indexed measurements, the tilde filter the
/// odd-indexed ones. All three have N points at step 2h and target the same
/// physical time, halfway between an even and an odd sample.
///
/// Locations are in the doubled grid's units, centred at c = (1 + N) / 2:
/// hat_G at c - 1/4, tilde_G at c + 1/4, hat_H at c - 1/4 (derivative) or
/// c + 1/4 (one raw step h later). A window whose first raw sample is odd
/// sees the parities swapped, so its hat filters sit at the mirrored phase;
/// hat_G and tilde_G trade places there and hat_H_mirrored covers hat_H.
struct SplitFilterBank {
  FilterWeights hat_H;
  FilterWeights hat_G;
  FilterWeights tilde_G;
  FilterWeights hat_H_mirrored;
  Mode mode;
  int base_window;   // N, points per split filter
  double base_step;  // h, raw sampling period

  OperatorKind response_operator() const;
  /// Raw samples covered by one regression window (2N).
  int span() const noexcept { return 2 * base_window; }
};

/// Throws Error(precondition) for N < 2 or h <= 0 and Error(rank) for p > N.
SplitFilterBank build_split_bank(Mode mode, int window, double step, int exactness);

/// phi(t, state) -> features. `dim` is the feature dimension d_phi.
struct FeatureMap {
  int dim = 0;
  std::function<void(double t, std::span<const double> state, std::span<double> out)> eval;
};

FeatureMap identity_features(int state_dim);

struct DesignMatrices {
  Eigen::MatrixXd X;      // n' x d_phi, features of hat-filtered state
  Eigen::MatrixXd Y;      // n' x d_H, hat-filtered response
  Eigen::MatrixXd Z;      // n' x d_phi, rho_mu-truncated features of tilde-filtered state
  Eigen::VectorXd times;  // regression times t_j
  int window_span = 0;    // raw-sample dependence range

  Eigen::Index rows() const noexcept { return X.rows(); }
};

struct DesignOptions {
  double mu = 200.0;
  int stride = 1;
};

/// rho_mu(x) = x / (1 + ‖x‖ / mu). The result has norm strictly below mu.
Eigen::VectorXd rho_truncate(const Eigen::Ref<const Eigen::VectorXd>& x, double mu);

/// Measurement row r (0-based) is the sample z_{r+1} taken at time (r + 1) h.
/// Regression windows start at raw offsets 0, stride, 2 stride, ... while
/// 2N samples fit; trailing samples are dropped. Parallel over windows.
DesignMatrices assemble_design(const Eigen::MatrixXd& measurements, const SplitFilterBank& bank,
                               const FeatureMap& features, const DesignOptions& options);

/// Straightforward single-threaded construction via apply_filter on gathered
/// sample vectors. Reference for assemble_design.
DesignMatrices assemble_design_serial(const Eigen::MatrixXd& measurements,
                                      const SplitFilterBank& bank, const FeatureMap& features,
                                      const DesignOptions& options);

/// Number of regression windows assemble_design will produce.
Eigen::Index regression_count(Eigen::Index samples, const SplitFilterBank& bank, int stride);

}  // namespace lpiv
