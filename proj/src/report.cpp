#include "lpiv/report.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lpiv/error.hpp"
#include "lpiv/rng.hpp"

namespace lpiv {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void write_series_csv(std::ostream& out, const Eigen::VectorXd& times, const Eigen::MatrixXd& values) {
  out << 't';
  for (Eigen::Index c = 0; c < values.cols(); ++c) out << ",x" << c + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out << format_double(times(i));
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << ',' << format_double(values(i, c));
    out << '\n';
  }
}

void write_filter_csv(std::ostream& out, const FilterWeights& weights) {
  const Eigen::MatrixXd& d = weights.coefficients();
  out << 'k';
  for (Eigen::Index q = 0; q < d.rows(); ++q) out << ",weight_d" << q;
  out << '\n';
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    out << k + 1;
    for (Eigen::Index q = 0; q < d.rows(); ++q) out << ',' << format_double(d(q, k));
    out << '\n';
  }
}

void write_design_csv(std::ostream& out, const DesignMatrices& design) {
  out << "t";
  for (Eigen::Index c = 0; c < design.X.cols(); ++c) out << ",X" << c;
  for (Eigen::Index c = 0; c < design.Y.cols(); ++c) out << ",Y" << c;
  for (Eigen::Index c = 0; c < design.Z.cols(); ++c) out << ",Z" << c;
  out << '\n';
  for (Eigen::Index j = 0; j < design.rows(); ++j) {
    out << format_double(design.times(j));
    for (Eigen::Index c = 0; c < design.X.cols(); ++c) out << ',' << format_double(design.X(j, c));
    for (Eigen::Index c = 0; c < design.Y.cols(); ++c) out << ',' << format_double(design.Y(j, c));
    for (Eigen::Index c = 0; c < design.Z.cols(); ++c) out << ',' << format_double(design.Z(j, c));
    out << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& results) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& r : results) {
    if (r.ok) {
      rows = r.theta_iv.rows();
      cols = r.theta_iv.cols();
      break;
    }
  }
  out << "trial,status";
  for (const char* prefix : {"iv", "ls"})
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) out << ',' << prefix << '_' << i << j;
  out << ",iv_sigma_min,iv_clipped,ls_sigma_min,error\n";
  for (const auto& r : results) {
    out << r.trial_index << ',' << (r.ok ? "ok" : "failed");
    for (const Eigen::MatrixXd* m : {&r.theta_iv, &r.theta_ls})
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          out << ',' << (r.ok ? format_double((*m)(i, j)) : std::string());
    if (r.ok) {
      out << ',' << format_double(r.iv_excitation.sigma_min) << ',' << r.iv_clipped << ','
          << format_double(r.ls_sigma_min) << ",\n";
    } else {
      std::string msg = r.error;
      for (char& ch : msg)
        if (ch == '"' || ch == ',' || ch == '\n') ch = ' ';
      out << ",,,\"" << msg << "\"\n";
    }
  }
}

void write_kde_csv(std::ostream& out, const std::vector<KdeRow>& rows) {
  out << "entry_row,entry_col,estimator,grid_value,density,mean,reference\n";
  for (const auto& r : rows) {
    out << r.entry_row << ',' << r.entry_col << ',' << to_string(r.estimator) << ','
        << format_double(r.grid_value) << ',' << format_double(r.density) << ','
        << format_double(r.mean) << ',' << format_double(r.reference) << '\n';
  }
}

namespace {

double parse_field(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse '" << text << "' as a number";
    throw Error(ErrorKind::input, msg.str());
  }
  return v;
}

}  // namespace

Series read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::input, "empty CSV");
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_field(field, lineno));
    if (width == 0) width = row.size();
    if (row.size() != width || width < 2)
      throw Error(ErrorKind::input, "line " + std::to_string(lineno) + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  Series s;
  s.times.resize(static_cast<Eigen::Index>(rows.size()));
  s.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width) - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.times(i) = rows[i][0];
    for (std::size_t c = 1; c < width; ++c) s.values(i, c - 1) = rows[i][c];
  }
  return s;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const Estimate& e) {
  return json{{"method", std::string(to_string(e.method))},
              {"theta", to_json(e.theta)},
              {"sigma_min_ZX", e.sigma_min_ZX},
              {"clipped_directions", e.clipped_directions}};
}

json to_json(const Excitation& e) {
  return json{{"sigma_min", e.sigma_min}, {"satisfied", e.satisfied}, {"margin", e.margin}};
}

namespace {

json stats_json(const EstimatorSummary& s) {
  return json{{"bias_pct", s.stats.bias_pct}, {"std_pct", s.stats.std_pct},
              {"rmse_pct", s.stats.rmse_pct}, {"bias_se", s.se.bias_pct},
              {"std_se", s.se.std_pct},       {"rmse_se", s.se.rmse_pct}};
}

}  // namespace

json to_json(const SummaryStats& s) {
  return json{{"reference", std::string(to_string(s.reference))},
              {"reference_norm", s.reference_norm},
              {"trials", s.trials},
              {"failures", s.failures},
              {"iv", stats_json(s.iv)},
              {"ls", stats_json(s.ls)}};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

}  // namespace

BenchmarkOutputs run_benchmark(const ExperimentConfig& config, const std::filesystem::path& directory,
                               Execution execution) {
  const ExperimentContext ctx = prepare_experiment(config);
  const std::vector<TrialResult> results = run_monte_carlo(ctx, execution);
  const SummaryStats summary =
      summarize(results, ctx.reference, ctx.reference_kind, ctx.config.bootstrap,
                stream_seed(ctx.config.master_seed, 0xb007ULL));

  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + directory.string() + ": " + ec.message());

  std::ostringstream trials;
  write_trials_csv(trials, results);
  write_file(directory / "trials.csv", trials.str());

  json doc = to_json(summary);
  doc["config"] = to_json(ctx.config);
  doc["requested_p"] = ctx.requested_p;
  doc["regression_rows"] = ctx.regression_rows;
  doc["reference_theta"] = to_json(ctx.reference);
  doc["warnings"] = ctx.warnings;
  doc["pythagorean_gap"] = {
      {"iv", summary.iv.stats.bias_pct * summary.iv.stats.bias_pct +
                 summary.iv.stats.std_pct * summary.iv.stats.std_pct -
                 summary.iv.stats.rmse_pct * summary.iv.stats.rmse_pct},
      {"ls", summary.ls.stats.bias_pct * summary.ls.stats.bias_pct +
                 summary.ls.stats.std_pct * summary.ls.stats.std_pct -
                 summary.ls.stats.rmse_pct * summary.ls.stats.rmse_pct}};
  write_file(directory / "summary.json", doc.dump(2) + "\n");

  if (summary.trials >= 10) {
    std::ostringstream kde;
    write_kde_csv(kde, kde_export(results, ctx.reference, ctx.config.kde_grid));
    write_file(directory / "kde.csv", kde.str());
  }
  return {directory, summary, ctx.warnings};
}

}  // namespace lpiv
