#include "lpiv/bounds.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lpiv/error.hpp"
#include "lpiv/rng.hpp"

namespace lpiv {

namespace {

void check(const GammaParams& p) {
  if (!(p.r >= 1.0) || !std::isfinite(p.r)) throw Error(ErrorKind::domain, "gamma needs r >= 1");
  if (!(p.a > 0.0) || !(p.a < p.b) || !std::isfinite(p.b))
    throw Error(ErrorKind::domain, "gamma needs 0 < a < b < inf");
  if (!(p.K > 0.0) || !std::isfinite(p.K)) throw Error(ErrorKind::domain, "gamma needs K > 0");
}

constexpr long kBlock = 4096;

double block_sum(const GammaParams& p, long begin, long end, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, p.K / std::numbers::sqrt2);
  double sum = 0.0;
  for (long i = begin; i < end; ++i) {
    const double w = std::abs(normal(rng));
    const double x = 1.0 / (p.a + std::max(0.0, p.b - w));
    sum += std::pow(x, p.r);
  }
  return sum;
}

GammaCheck finish(const GammaParams& p, double sum, long trials) {
  GammaCheck out;
  out.empirical_Lr = std::pow(sum / static_cast<double>(trials), 1.0 / p.r);
  out.bound = gamma(p).total;
  out.ratio = out.empirical_Lr / out.bound;
  return out;
}

void check_trials(long trials) {
  if (trials < 10000) throw Error(ErrorKind::precondition, "mc_check_gamma needs >= 1e4 trials");
}

}  // namespace

GammaValue gamma(const GammaParams& p) {
  check(p);
  const double r = p.r, a = p.a, b = p.b, K = p.K;
  GammaValue g;
  g.head = 2.0 / b;
  const double log_ab = std::log(a / b);
  const double log_body = (std::log(r) + std::log(K) + 0.5 * std::log(std::numbers::pi)) / r -
                          2.0 * (1.0 + 1.0 / r) * std::log(b) +
                          K * K * (r + 1.0) * (r + 1.0) * log_ab * log_ab /
                              (4.0 * r * (b - a) * (b - a));
  g.body = std::exp(log_body);
  g.tail = std::exp(-b * b / (r * K * K)) / a;
  g.total = g.head + g.body + g.tail;
  return g;
}

double holder_order(double q, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::domain, "Hölder parameter eps must be positive");
  return q * (1.0 + 1.0 / eps);
}

GammaCheck mc_check_gamma(const GammaParams& p, long trials, std::uint64_t seed) {
  check(p);
  check_trials(trials);
  const long blocks = (trials + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long blk = 0; blk < blocks; ++blk) {
    const long begin = blk * kBlock;
    const long end = std::min(trials, begin + kBlock);
    sums[blk] = block_sum(p, begin, end, stream_seed(seed, static_cast<std::uint64_t>(blk)));
  }
  double sum = 0.0;
  for (double s : sums) sum += s;
  return finish(p, sum, trials);
}

GammaCheck mc_check_gamma_serial(const GammaParams& p, long trials, std::uint64_t seed) {
  check(p);
  check_trials(trials);
  double sum = 0.0;
  for (long begin = 0, blk = 0; begin < trials; begin += kBlock, ++blk) {
    sum += block_sum(p, begin, std::min(trials, begin + kBlock),
                     stream_seed(seed, static_cast<std::uint64_t>(blk)));
  }
  return finish(p, sum, trials);
}

double corollary_rate(double n, double h, int p, int d) {
  if (!(n > 0.0) || !(h > 0.0)) throw Error(ErrorKind::domain, "rate needs n > 0 and h > 0");
  if (d < 0 || d >= p) throw Error(ErrorKind::domain, "rate needs 0 <= d < p");
  const double denom = 2.0 * p + 1.0;
  return std::pow(h, (p - d) / denom) + std::sqrt(1.0 / (n * std::pow(h, 2.0 * p / denom)));
}

double ideal_window(double h, int p) {
  if (!(h > 0.0 && h < 1.0)) throw Error(ErrorKind::domain, "ideal window needs h in (0, 1)");
  if (p < 1) throw Error(ErrorKind::domain, "ideal window needs p >= 1");
  return std::pow(h, -2.0 * p / (2.0 * p + 1.0));
}

}  // namespace lpiv
