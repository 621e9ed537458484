#include "lpiv/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lpiv/error.hpp"
#include "lpiv/estimator.hpp"
#include "lpiv/rng.hpp"

namespace lpiv {

State3 lorenz_rhs(double t, const State3& x, const LorenzParams& p) {
  const double u = std::sin(2.0 * std::numbers::pi * p.forcing_freq * t);
  return {p.sigma * (x(1) - x(0)), x(0) * (p.rho - x(2)) - x(1), u + x(0) * x(1) - p.beta * x(2)};
}

Features6 feature_map(double t, const State3& x, double f) {
  Features6 phi;
  phi << std::sin(2.0 * std::numbers::pi * f * t), x(0), x(1), x(2), x(0) * x(1), x(0) * x(2);
  return phi;
}

FeatureMap lorenz_features(double f) {
  return FeatureMap{6, [f](double t, std::span<const double> s, std::span<double> out) {
                      out[0] = std::sin(2.0 * std::numbers::pi * f * t);
                      out[1] = s[0];
                      out[2] = s[1];
                      out[3] = s[2];
                      out[4] = s[0] * s[1];
                      out[5] = s[0] * s[2];
                    }};
}

Eigen::MatrixXd true_theta(const LorenzParams& p) {
  Eigen::MatrixXd theta(6, 3);
  theta << 0.0, 0.0, 1.0,
           -p.sigma, p.rho, 0.0,
           p.sigma, -1.0, 0.0,
           0.0, 0.0, -p.beta,
           0.0, 0.0, 1.0,
           0.0, -1.0, 0.0;
  return theta;
}

Trajectory integrate(const LorenzParams& params, const State3& x0, double h, long n, int substeps) {
  if (!(h > 0.0)) throw Error(ErrorKind::precondition, "step h must be positive");
  if (n < 1) throw Error(ErrorKind::precondition, "sample count must be positive");
  if (substeps < 1) throw Error(ErrorKind::precondition, "substeps must be >= 1");

  Trajectory out;
  out.times.resize(n);
  out.states.resize(n, 3);
  const double dt = h / substeps;
  State3 x = x0;
  for (long i = 0; i < n; ++i) {
    // Restart from the exact sample time to avoid accumulating t drift.
    double t = static_cast<double>(i) * h;
    for (int s = 0; s < substeps; ++s) {
      const State3 k1 = lorenz_rhs(t, x, params);
      const State3 k2 = lorenz_rhs(t + 0.5 * dt, x + 0.5 * dt * k1, params);
      const State3 k3 = lorenz_rhs(t + 0.5 * dt, x + 0.5 * dt * k2, params);
      const State3 k4 = lorenz_rhs(t + dt, x + dt * k3, params);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = static_cast<double>(i) * h + (s + 1) * dt;
    }
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg << "trajectory diverged at sample " << i + 1;
      throw DivergenceError(msg.str(), i + 1);
    }
    out.times(i) = static_cast<double>(i + 1) * h;
    out.states.row(i) = x.transpose();
  }
  return out;
}

MeasurementSeries add_noise(const Trajectory& traj, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0)) throw Error(ErrorKind::precondition, "noise variance must be nonnegative");
  MeasurementSeries out;
  out.values = traj.states;
  out.noise_variance = eta;
  out.seed = seed;
  if (eta == 0.0) return out;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(eta));
  // Row-major draw order: sample i, then components.
  for (Eigen::Index i = 0; i < out.values.rows(); ++i)
    for (Eigen::Index c = 0; c < out.values.cols(); ++c) out.values(i, c) += normal(rng);
  return out;
}

Eigen::MatrixXd pseudo_true_discrete(const Trajectory& clean, const SplitFilterBank& bank,
                                     double forcing_freq, const DesignOptions& options) {
  if (bank.mode != Mode::discrete)
    throw Error(ErrorKind::precondition, "pseudo-true reference needs a discrete-mode bank");
  const DesignMatrices design =
      assemble_design(clean.states, bank, lorenz_features(forcing_freq), options);
  return ls_estimate(design).theta;
}

Eigen::MatrixXd pseudo_true_discrete(const DiscretePipeline& p) {
  const Trajectory clean = integrate(p.params, p.x0, p.h, p.n, p.substeps);
  const SplitFilterBank bank = build_split_bank(Mode::discrete, p.window, p.h, p.exactness);
  return pseudo_true_discrete(clean, bank, p.params.forcing_freq, {p.mu, p.stride});
}

}  // namespace lpiv
