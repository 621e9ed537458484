#include "lpiv/monte_carlo.hpp"

#include <exception>

#include "lpiv/error.hpp"
#include "lpiv/rng.hpp"

namespace lpiv {

std::string_view to_string(ReferenceKind kind) {
  return kind == ReferenceKind::ground_truth ? "ground_truth" : "pseudo_true";
}

namespace {

SplitFilterBank bank_with_fallback(ExperimentConfig& config, std::vector<std::string>& warnings) {
  try {
    return build_split_bank(config.mode, config.N, config.h, config.p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::rank && e.kind() != ErrorKind::conditioning) throw;
    if (config.fallback_p == config.p) throw;
    warnings.push_back("p=" + std::to_string(config.p) + " rejected (" + e.what() +
                       "); using fallback p=" + std::to_string(config.fallback_p));
    config.p = config.fallback_p;
    return build_split_bank(config.mode, config.N, config.h, config.p);
  }
}

}  // namespace

ExperimentContext prepare_experiment(const ExperimentConfig& input) {
  input.validate();
  ExperimentConfig config = input;
  std::vector<std::string> warnings;
  const LorenzParams params{10.0, 28.0, 8.0 / 3.0, config.forcing_freq};
  const State3 x0(config.x0[0], config.x0[1], config.x0[2]);

  Trajectory clean = integrate(params, x0, config.h, config.n, config.substeps);
  SplitFilterBank bank = bank_with_fallback(config, warnings);
  FeatureMap features = lorenz_features(config.forcing_freq);
  const DesignOptions options{config.mu, config.stride};

  Eigen::MatrixXd reference;
  ReferenceKind kind;
  if (config.mode == Mode::continuous) {
    reference = true_theta(params);
    kind = ReferenceKind::ground_truth;
  } else {
    reference = pseudo_true_discrete(clean, bank, config.forcing_freq, options);
    kind = ReferenceKind::pseudo_true;
  }
  const Eigen::Index rows = regression_count(config.n, bank, config.stride);
  return ExperimentContext{std::move(config), input.p,   std::move(clean),    std::move(bank),
                           std::move(features), std::move(reference), kind, rows,
                           std::move(warnings)};
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
  return stream_seed(master_seed, static_cast<std::uint64_t>(trial_index));
}

TrialResult run_trial(const ExperimentContext& ctx, int trial_index) {
  TrialResult out;
  out.trial_index = trial_index;
  try {
    const ExperimentConfig& c = ctx.config;
    const MeasurementSeries z = add_noise(ctx.clean, c.eta, trial_seed(c.master_seed, trial_index));
    const DesignMatrices design = assemble_design(z.values, ctx.bank, ctx.features, {c.mu, c.stride});
    const Estimate iv = iv_estimate(design, {c.lambda, c.mu});
    const Estimate ls = ls_estimate(design);
    if (!iv.theta.allFinite() || !ls.theta.allFinite())
      throw Error(ErrorKind::input, "non-finite estimate");
    out.theta_iv = iv.theta;
    out.theta_ls = ls.theta;
    out.iv_excitation = {iv.sigma_min_ZX, iv.sigma_min_ZX > c.lambda, iv.sigma_min_ZX - c.lambda};
    out.iv_clipped = iv.clipped_directions;
    out.ls_sigma_min = ls.sigma_min_ZX;
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

std::vector<TrialResult> run_monte_carlo(const ExperimentContext& ctx, Execution execution) {
  const int trials = ctx.config.trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  if (execution == Execution::serial) {
    for (int i = 0; i < trials; ++i) results[i] = run_trial(ctx, i);
    return results;
  }
  // run_trial never throws; each iteration writes its own slot.
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < trials; ++i) results[i] = run_trial(ctx, i);
  return results;
}

}  // namespace lpiv
