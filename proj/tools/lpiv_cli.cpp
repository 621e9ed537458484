// lpiv: simulate, filter, estimate and benchmark the split-sample IV estimator.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpiv/bounds.hpp"
#include "lpiv/config.hpp"
#include "lpiv/dynamics.hpp"
#include "lpiv/error.hpp"
#include "lpiv/estimator.hpp"
#include "lpiv/monte_carlo.hpp"
#include "lpiv/polyfilter.hpp"
#include "lpiv/report.hpp"
#include "lpiv/splitfilters.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string mode;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Experiment manifest (JSON)");
  cmd->add_option("--mode", o.mode, "continuous or discrete")
      ->check(CLI::IsMember({"continuous", "discrete"}));
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--set", o.overrides, "Override a config field: key=value")->take_all();
}

lpiv::ExperimentConfig resolve_config(const CommonOptions& o) {
  std::optional<lpiv::Mode> mode;
  if (!o.mode.empty()) mode = lpiv::parse_mode(o.mode);
  lpiv::ExperimentConfig c = o.config_path.empty()
                                 ? lpiv::ExperimentConfig::defaults(mode.value_or(lpiv::Mode::continuous))
                                 : lpiv::load_config(o.config_path, mode);
  for (const auto& s : o.overrides) lpiv::apply_override(c, s);
  if (o.trials) c.trials = *o.trials;
  if (o.seed) c.master_seed = *o.seed;
  c.validate();
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lpiv::Error(lpiv::ErrorKind::io, "cannot write " + path.string());
  out << text;
}

void emit(const CommonOptions& o, const std::string& file, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text(fs::path(o.out) / file, text);
  }
}

lpiv::LorenzParams lorenz_params(const lpiv::ExperimentConfig& c) {
  return {10.0, 28.0, 8.0 / 3.0, c.forcing_freq};
}

int cmd_simulate(const CommonOptions& o, int trial) {
  const auto c = resolve_config(o);
  const lpiv::Trajectory traj =
      lpiv::integrate(lorenz_params(c), {c.x0[0], c.x0[1], c.x0[2]}, c.h, c.n, c.substeps);
  const auto z = lpiv::add_noise(traj, c.eta, lpiv::trial_seed(c.master_seed, trial));
  std::ostringstream meas;
  lpiv::write_series_csv(meas, traj.times, z.values);
  if (o.out.empty()) {
    std::cout << meas.str();
    return 0;
  }
  std::ostringstream clean;
  lpiv::write_series_csv(clean, traj.times, traj.states);
  write_text(fs::path(o.out) / "trajectory.csv", clean.str());
  write_text(fs::path(o.out) / "measurements.csv", meas.str());
  return 0;
}

struct FilterOptions {
  std::optional<double> location;
  std::optional<int> window;
  std::optional<double> step;
  std::optional<int> order;
  int derivative = 0;
  std::optional<int> max_derivative;
  std::string which = "hat_H";
};

int cmd_filters(const CommonOptions& o, const FilterOptions& f) {
  const auto c = resolve_config(o);
  std::ostringstream text;
  if (f.location) {
    lpiv::FilterSpec spec;
    spec.window = f.window.value_or(c.N);
    spec.step = f.step.value_or(c.h);
    spec.location = *f.location;
    spec.derivative = f.derivative;
    spec.exactness = f.order.value_or(c.p);
    spec.max_derivative = f.max_derivative.value_or(f.derivative);
    lpiv::write_filter_csv(text, lpiv::build_filter(spec));
  } else {
    const auto bank = lpiv::build_split_bank(c.mode, f.window.value_or(c.N),
                                             f.step.value_or(c.h), f.order.value_or(c.p));
    const lpiv::FilterWeights* w = nullptr;
    if (f.which == "hat_H") w = &bank.hat_H;
    else if (f.which == "hat_G") w = &bank.hat_G;
    else if (f.which == "tilde_G") w = &bank.tilde_G;
    else if (f.which == "hat_H_mirrored") w = &bank.hat_H_mirrored;
    else throw lpiv::Error(lpiv::ErrorKind::config, "unknown filter '" + f.which + "'");
    lpiv::write_filter_csv(text, *w);
  }
  emit(o, "filter.csv", text.str());
  return 0;
}

int cmd_estimate(const CommonOptions& o, const std::string& data, int trial,
                 const std::string& dump_design) {
  auto c = resolve_config(o);
  Eigen::MatrixXd values;
  if (data.empty()) {
    const auto traj =
        lpiv::integrate(lorenz_params(c), {c.x0[0], c.x0[1], c.x0[2]}, c.h, c.n, c.substeps);
    values = lpiv::add_noise(traj, c.eta, lpiv::trial_seed(c.master_seed, trial)).values;
  } else {
    std::ifstream in(data);
    if (!in) throw lpiv::Error(lpiv::ErrorKind::io, "cannot open " + data);
    lpiv::Series s = lpiv::read_series_csv(in);
    if (s.values.cols() != 3)
      throw lpiv::Error(lpiv::ErrorKind::input, "expected columns t,x1,x2,x3");
    if (s.times.size() >= 2) c.h = s.times(1) - s.times(0);
    values = std::move(s.values);
  }
  std::vector<std::string> warnings;
  lpiv::SplitFilterBank bank = [&] {
    try {
      return lpiv::build_split_bank(c.mode, c.N, c.h, c.p);
    } catch (const lpiv::Error& e) {
      if (e.kind() != lpiv::ErrorKind::rank && e.kind() != lpiv::ErrorKind::conditioning) throw;
      warnings.push_back(std::string(e.what()) + "; using fallback p=" + std::to_string(c.fallback_p));
      c.p = c.fallback_p;
      return lpiv::build_split_bank(c.mode, c.N, c.h, c.p);
    }
  }();
  const auto design = lpiv::assemble_design(values, bank, lpiv::lorenz_features(c.forcing_freq),
                                            {c.mu, c.stride});
  if (!dump_design.empty()) {
    std::ostringstream csv;
    lpiv::write_design_csv(csv, design);
    write_text(dump_design, csv.str());
  }
  const auto iv = lpiv::iv_estimate(design, {c.lambda, c.mu});
  const auto ls = lpiv::ls_estimate(design);
  json doc{{"mode", std::string(lpiv::to_string(c.mode))},
           {"p", c.p},
           {"regression_rows", design.rows()},
           {"iv", lpiv::to_json(iv)},
           {"ls", lpiv::to_json(ls)},
           {"excitation", lpiv::to_json(lpiv::excitation_check(design, c.lambda))},
           {"warnings", warnings}};
  emit(o, "estimate.json", doc.dump(2) + "\n");
  return 0;
}

int cmd_benchmark(const CommonOptions& o, bool serial) {
  const auto c = resolve_config(o);
  const fs::path dir = o.out.empty() ? fs::path("results") / c.name : fs::path(o.out);
  const auto result =
      lpiv::run_benchmark(c, dir, serial ? lpiv::Execution::serial : lpiv::Execution::parallel);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  json doc = lpiv::to_json(result.summary);
  doc["directory"] = result.directory.string();
  std::cout << doc.dump(2) << '\n';
  return 0;
}

struct BoundsOptions {
  double r = 2.0, a = 1.0, b = 10.0, K = 1.0, eps = 1.0;
  std::optional<double> n, h;
  std::optional<int> p;
  std::optional<int> d;
};

int cmd_bounds(const CommonOptions& o, const BoundsOptions& b) {
  const auto c = resolve_config(o);
  const double n = b.n.value_or(static_cast<double>(c.n));
  const double h = b.h.value_or(c.h);
  const int p = b.p.value_or(c.p);
  const int d = b.d.value_or(c.mode == lpiv::Mode::continuous ? 1 : 0);
  const lpiv::GammaParams gp{b.r, b.a, b.b, b.K};
  auto gamma_json = [](const lpiv::GammaValue& g) {
    return json{{"head", g.head}, {"body", g.body}, {"tail", g.tail}, {"total", g.total}};
  };
  lpiv::GammaParams holder = gp;
  holder.r = lpiv::holder_order(gp.r, b.eps);
  const double ideal = lpiv::ideal_window(h, p);
  json doc{{"gamma", gamma_json(lpiv::gamma(gp))},
           {"gamma_holder", gamma_json(lpiv::gamma(holder))},
           {"holder_order", holder.r},
           {"corollary_rate", lpiv::corollary_rate(n, h, p, d)},
           {"ideal_window", ideal},
           {"configured_window", c.N},
           {"window_ratio", c.N / ideal},
           {"params", {{"r", b.r}, {"a", b.a}, {"b", b.b}, {"K", b.K}, {"eps", b.eps},
                       {"n", n}, {"h", h}, {"p", p}, {"d", d}}}};
  emit(o, "bounds.json", doc.dump(2) + "\n");
  return 0;
}

void print_error(std::string_view kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-sample instrumental variables for nonlinear system identification"};
  app.require_subcommand(1);

  CommonOptions common;
  auto* simulate = app.add_subcommand("simulate", "Emit trajectory and measurement CSV");
  auto* filters = app.add_subcommand("filters", "Dump a local polynomial stencil as CSV");
  auto* estimate = app.add_subcommand("estimate", "Estimate theta from one dataset (JSON)");
  auto* benchmark = app.add_subcommand("benchmark", "Monte Carlo experiment");
  auto* bounds = app.add_subcommand("bounds", "Moment bound and rate evaluators (JSON)");
  for (auto* cmd : {simulate, filters, estimate, benchmark, bounds}) add_common(cmd, common);

  int trial = 0;
  simulate->add_option("--trial", trial, "Trial index selecting the noise stream");

  FilterOptions fopt;
  filters->add_option("--location", fopt.location, "Target i0 in grid units (single filter)");
  filters->add_option("--window", fopt.window, "Window N");
  filters->add_option("--step", fopt.step, "Step h");
  filters->add_option("--order", fopt.order, "Exactness p");
  filters->add_option("--derivative", fopt.derivative, "Derivative d");
  filters->add_option("--max-derivative", fopt.max_derivative, "Rows 0..m");
  filters->add_option("--which", fopt.which, "Split-bank filter: hat_H, hat_G, tilde_G, hat_H_mirrored");

  std::string data, dump_design;
  estimate->add_option("--data", data, "Measurements CSV (t,x1,x2,x3); simulated if omitted");
  estimate->add_option("--trial", trial, "Trial index when simulating");
  estimate->add_option("--dump-design", dump_design, "Write the design matrices to this CSV");

  bool serial = false;
  benchmark->add_flag("--serial", serial, "Run trials on one thread");

  BoundsOptions bopt;
  bounds->add_option("--r", bopt.r, "Moment order r");
  bounds->add_option("--a", bopt.a, "Inner floor a");
  bounds->add_option("--b", bopt.b, "Outer level b");
  bounds->add_option("--K", bopt.K, "Subgaussian scale K");
  bounds->add_option("--eps", bopt.eps, "Hölder split parameter");
  bounds->add_option("--n", bopt.n, "Sample count for the rate");
  bounds->add_option("--step", bopt.h, "Sampling period h for the rate");
  bounds->add_option("--p", bopt.p, "Exactness p for the rate");
  bounds->add_option("--d", bopt.d, "Derivative order for the rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*simulate) return cmd_simulate(common, trial);
    if (*filters) return cmd_filters(common, fopt);
    if (*estimate) return cmd_estimate(common, data, trial, dump_design);
    if (*benchmark) return cmd_benchmark(common, serial);
    if (*bounds) return cmd_bounds(common, bopt);
  } catch (const lpiv::Error& e) {
    print_error(lpiv::to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
