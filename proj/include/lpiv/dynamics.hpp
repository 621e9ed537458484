#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "lpiv/splitfilters.hpp"

namespace lpiv {

/// Lorenz system with a sinusoidal input u(t) = sin(2 pi f t) entering the
/// third equation additively, as encoded by true_theta().
struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double forcing_freq = 1.0;
};

using State3 = Eigen::Vector3d;
using Features6 = Eigen::Matrix<double, 6, 1>;

State3 lorenz_rhs(double t, const State3& state, const LorenzParams& params);

/// (sin(2 pi f t), x1, x2, x3, x1 x2, x1 x3)
Features6 feature_map(double t, const State3& state, double forcing_freq);

/// The same map behind the FeatureMap interface used by assemble_design.
FeatureMap lorenz_features(double forcing_freq);

/// 6 x 3 parameter with lorenz_rhs(t, x) = true_theta()ᵀ feature_map(t, x).
/// The default arguments give the benchmark's ground truth.
Eigen::MatrixXd true_theta(const LorenzParams& params = {});

struct Trajectory {
  Eigen::VectorXd times;  // i h, i = 1..n
  Eigen::MatrixXd states; // n x 3
};

struct MeasurementSeries {
  Eigen::MatrixXd values;  // n x 3
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
};

/// Classical RK4 with `substeps` internal steps per output sample. Samples
/// are taken at h, 2h, ..., nh starting from x0 at t = 0. Throws
/// DivergenceError naming the output index if the state becomes non-finite.
Trajectory integrate(const LorenzParams& params, const State3& x0, double h, long n, int substeps);

/// z_i = xi(ih) + N(0, eta I), reproducible from `seed`.
MeasurementSeries add_noise(const Trajectory& traj, double eta, std::uint64_t seed);

/// Everything that determines the discrete-time pseudo-true parameter.
struct DiscretePipeline {
  LorenzParams params;
  State3 x0{-8.0, 8.0, 27.0};
  double h = 1e-3;
  long n = 100000;
  int substeps = 10;
  int window = 100;
  int exactness = 75;
  double mu = 200.0;
  int stride = 1;
};

/// Least squares on the zero-noise design of the discrete-time pipeline.
Eigen::MatrixXd pseudo_true_discrete(const DiscretePipeline& pipeline);
/// Same, for a trajectory and bank that were already built.
Eigen::MatrixXd pseudo_true_discrete(const Trajectory& clean, const SplitFilterBank& bank,
                                     double forcing_freq, const DesignOptions& options);

}  // namespace lpiv
