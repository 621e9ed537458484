#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "lpiv/splitfilters.hpp"

namespace lpiv {

struct IvConfig {
  double lambda = 1.0;  // clipping floor
  double mu = 200.0;    // truncation level; applied when the design is assembled
  void validate() const;
};

enum class Method { iv, ls };
std::string_view to_string(Method method);

struct Estimate {
  Eigen::MatrixXd theta;      // d_phi x d_H
  double sigma_min_ZX = 0.0;  // before clipping; sigma_min(XᵀX) for least squares
  int clipped_directions = 0;
  Method method = Method::iv;
};

/// Replaces every singular value sigma_i of A by max(lambda, sigma_i),
/// keeping the singular vectors. Throws Error(input) on non-finite entries.
Eigen::MatrixXd clip_singular_values(const Eigen::MatrixXd& a, double lambda);

/// theta = clip_lambda(ZᵀX)⁻¹ ZᵀY.
Estimate iv_estimate(const DesignMatrices& design, const IvConfig& config);

/// Ordinary least squares (XᵀX)⁻¹XᵀY through a column-pivoted QR of X.
/// Throws SingularDesignError when X is numerically rank deficient.
Estimate ls_estimate(const DesignMatrices& design);

struct Excitation {
  double sigma_min = 0.0;  // plug-in sigma_min(ZᵀX)
  bool satisfied = false;  // sigma_min > lambda
  double margin = 0.0;     // sigma_min - lambda
};

Excitation excitation_check(const DesignMatrices& design, double lambda);

}  // namespace lpiv
