#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lpiv/config.hpp"
#include "lpiv/dynamics.hpp"
#include "lpiv/estimator.hpp"
#include "lpiv/monte_carlo.hpp"
#include "lpiv/polyfilter.hpp"
#include "lpiv/stats.hpp"

namespace lpiv {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double value);

// CSV writers: comma separated, header row, '.' decimal point.
void write_series_csv(std::ostream& out, const Eigen::VectorXd& times, const Eigen::MatrixXd& values);
void write_filter_csv(std::ostream& out, const FilterWeights& weights);
void write_design_csv(std::ostream& out, const DesignMatrices& design);
void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& results);
void write_kde_csv(std::ostream& out, const std::vector<KdeRow>& rows);

/// Reads a (t, x1, x2, ...) CSV with a header row; returns times and values.
struct Series {
  Eigen::VectorXd times;
  Eigen::MatrixXd values;
};
Series read_series_csv(std::istream& in);

nlohmann::json to_json(const Eigen::MatrixXd& m);  // row-major nested arrays
nlohmann::json to_json(const Estimate& estimate);
nlohmann::json to_json(const Excitation& excitation);
nlohmann::json to_json(const SummaryStats& summary);

struct BenchmarkOutputs {
  std::filesystem::path directory;
  SummaryStats summary;
  std::vector<std::string> warnings;
};

/// Full Monte Carlo experiment: writes trials.csv, summary.json and kde.csv
/// into `directory`. Every byte is a function of the configuration.
BenchmarkOutputs run_benchmark(const ExperimentConfig& config, const std::filesystem::path& directory,
                               Execution execution = Execution::parallel);

}  // namespace lpiv
