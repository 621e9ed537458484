#include "lpiv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpiv/error.hpp"
#include "lpiv/rng.hpp"

namespace lpiv {

ErrorStats error_stats(std::span<const Eigen::MatrixXd> thetas, const Eigen::MatrixXd& reference) {
  if (thetas.size() < 2)
    throw Error(ErrorKind::insufficient_data, "need at least two successful trials");
  const double count = static_cast<double>(thetas.size());
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(reference.rows(), reference.cols());
  for (const auto& t : thetas) mean += t;
  mean /= count;

  double spread = 0.0, risk = 0.0;
  for (const auto& t : thetas) {
    spread += (t - mean).squaredNorm();
    risk += (t - reference).squaredNorm();
  }
  const double scale = 100.0 / reference.norm();
  return {(mean - reference).norm() * scale, std::sqrt(spread / count) * scale,
          std::sqrt(risk / count) * scale};
}

ErrorStats bootstrap_se(std::span<const Eigen::MatrixXd> thetas, const Eigen::MatrixXd& reference,
                        int resamples, std::uint64_t seed) {
  if (thetas.size() < 2)
    throw Error(ErrorKind::insufficient_data, "need at least two successful trials");
  if (resamples < 2) throw Error(ErrorKind::precondition, "bootstrap needs >= 2 resamples");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, thetas.size() - 1);
  std::vector<Eigen::MatrixXd> sample(thetas.size());
  Eigen::ArrayXd bias(resamples), spread(resamples), rmse(resamples);
  for (int b = 0; b < resamples; ++b) {
    for (auto& s : sample) s = thetas[pick(rng)];
    const ErrorStats st = error_stats(sample, reference);
    bias(b) = st.bias_pct;
    spread(b) = st.std_pct;
    rmse(b) = st.rmse_pct;
  }
  auto sd = [](const Eigen::ArrayXd& v) {
    return std::sqrt((v - v.mean()).square().sum() / static_cast<double>(v.size() - 1));
  };
  return {sd(bias), sd(spread), sd(rmse)};
}

namespace {

std::vector<Eigen::MatrixXd> collect(const std::vector<TrialResult>& results, Method method) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& r : results)
    if (r.ok) out.push_back(method == Method::iv ? r.theta_iv : r.theta_ls);
  return out;
}

}  // namespace

SummaryStats summarize(const std::vector<TrialResult>& results, const Eigen::MatrixXd& reference,
                       ReferenceKind kind, int resamples, std::uint64_t seed) {
  const auto iv = collect(results, Method::iv);
  const auto ls = collect(results, Method::ls);
  SummaryStats s;
  s.reference = kind;
  s.reference_norm = reference.norm();
  s.trials = static_cast<int>(iv.size());
  s.failures = static_cast<int>(results.size()) - s.trials;
  s.iv.stats = error_stats(iv, reference);
  s.ls.stats = error_stats(ls, reference);
  s.iv.se = bootstrap_se(iv, reference, resamples, stream_seed(seed, 0));
  s.ls.se = bootstrap_se(ls, reference, resamples, stream_seed(seed, 1));
  return s;
}

Density kernel_density(std::span<const double> samples, int grid_points) {
  if (samples.empty()) throw Error(ErrorKind::insufficient_data, "no samples for density");
  if (grid_points < 2) throw Error(ErrorKind::precondition, "density grid needs >= 2 points");
  const double n = static_cast<double>(samples.size());
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  const double sd = samples.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;

  auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  double bw = 1.06 * spread * std::pow(n, -0.2);
  if (!(bw > 0.0)) bw = 1e-6 * std::max(1.0, std::abs(mean));

  Density out;
  out.bandwidth = bw;
  out.mean = mean;
  const double lo = std::min(mean - 4.0 * sd, sorted.front() - 4.0 * bw);
  const double hi = std::max(mean + 4.0 * sd, sorted.back() + 4.0 * bw);
  out.grid.resize(grid_points);
  out.density.resize(grid_points);
  const double norm = 1.0 / (n * bw * std::sqrt(2.0 * std::numbers::pi));
  for (int g = 0; g < grid_points; ++g) {
    const double x = lo + (hi - lo) * g / (grid_points - 1);
    double acc = 0.0;
    for (double v : sorted) {
      const double u = (x - v) / bw;
      acc += std::exp(-0.5 * u * u);
    }
    out.grid[g] = x;
    out.density[g] = acc * norm;
  }
  return out;
}

std::vector<KdeRow> kde_export(const std::vector<TrialResult>& results,
                               const Eigen::MatrixXd& reference, int grid_points) {
  std::vector<KdeRow> rows;
  for (Method method : {Method::iv, Method::ls}) {
    const auto thetas = collect(results, method);
    if (thetas.size() < 10)
      throw Error(ErrorKind::insufficient_data, "density export needs >= 10 successful trials");
    std::vector<double> values(thetas.size());
    for (Eigen::Index i = 0; i < reference.rows(); ++i) {
      for (Eigen::Index j = 0; j < reference.cols(); ++j) {
        for (std::size_t t = 0; t < thetas.size(); ++t) values[t] = thetas[t](i, j);
        const Density d = kernel_density(values, grid_points);
        for (int g = 0; g < grid_points; ++g)
          rows.push_back({static_cast<int>(i), static_cast<int>(j), method, d.grid[g],
                          d.density[g], d.mean, reference(i, j)});
      }
    }
  }
  return rows;
}

}  // namespace lpiv
