#pragma once

#include <cstdint>

namespace lpiv {

/// Parameters of the moment bound for X = 1 / (a + max(0, b - W)) where
/// P(W >= t) <= exp(-t^2 / K^2).
struct GammaParams {
  double r = 1.0;  // moment order, >= 1
  double a = 1.0;  // inner floor (plays lambda)
  double b = 2.0;  // outer level (plays sigma^2 - lambda)
  double K = 1.0;  // subgaussian scale
};

struct GammaValue {
  double head = 0.0;
  double body = 0.0;
  double tail = 0.0;
  double total = 0.0;
};

/// Upper bound on ‖X‖_r split into head, body and tail contributions, with
/// the constants instantiated from the layer-cake argument:
///
///   head = 2 / b
///   body = (r K sqrt(pi))^(1/r) / b^(2 (1 + 1/r))
///          * exp(K^2 (r + 1)^2 log^2(a / b) / (4 r (b - a)^2))
///   tail = exp(-b^2 / (r K^2)) / a
///
/// The body exponent comes from the Gaussian integral
/// ∫ exp(-s^2/K^2 + c s) ds = K sqrt(pi) exp(c^2 K^2 / 4) with c the chord
/// slope of log (a + b - s)^-(r+1). It is evaluated in log space and may
/// overflow to +inf, which is still a valid (vacuous) bound.
///
/// Throws Error(domain) unless 0 < a < b, K > 0 and r >= 1.
GammaValue gamma(const GammaParams& params);

/// Moment order after a Hölder split with conjugacy parameter eps:
/// q -> q (1 + 1/eps).
double holder_order(double q, double eps = 1.0);

struct GammaCheck {
  double empirical_Lr = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // empirical / bound
};

/// Monte Carlo estimate of ‖X‖_r with W = |N(0, K^2 / 2)|, which satisfies
/// the tail hypothesis. Parallel over fixed seed blocks, so the result does
/// not depend on the thread count. Requires trials >= 10^4.
GammaCheck mc_check_gamma(const GammaParams& params, long trials, std::uint64_t seed);
/// Single-threaded reference draw of the same estimator.
GammaCheck mc_check_gamma_serial(const GammaParams& params, long trials, std::uint64_t seed);

/// h^((p - d)/(2p + 1)) + sqrt(1 / (n h^(2p/(2p + 1)))), no constants.
double corollary_rate(double n, double h, int p, int d);

/// Window that balances filter bias and noise: h^(-2p/(2p + 1)).
double ideal_window(double h, int p);

}  // namespace lpiv
