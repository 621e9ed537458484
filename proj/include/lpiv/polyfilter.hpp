#pragma once

#include <span>

#include <Eigen/Dense>

namespace lpiv {

/// Relative residual ‖DA − B‖_F / ‖B‖_F accepted from the constraint solve.
inline constexpr double kFilterSolveTolerance = 1e-8;

/// A local polynomial stencil over N equispaced samples taken at k·h,
/// k = 1..N, evaluating derivatives of the underlying function at the
/// (possibly off-grid) point location·h.
struct FilterSpec {
  int window = 1;           // N
  double step = 1.0;        // h, time units
  double location = 1.0;    // i0, grid units; restricted to (0, N + 1)
  int derivative = 0;       // d, the row apply_filter uses by default
  int exactness = 1;        // p: exact on polynomials of degree <= p - 1
  int max_derivative = 0;   // m: rows 0..m are produced

  /// Throws Error(precondition) unless d <= m < p, h > 0, N >= 1 and the
  /// location is inside (0, N + 1). p > N is a rank error.
  void validate() const;
};

/// Immutable result of build_filter. Row d of the coefficient matrix is the
/// minimum-norm stencil for the d-th derivative.
class FilterWeights {
 public:
  FilterWeights(FilterSpec spec, Eigen::MatrixXd coefficients, double residual)
      : spec_(spec), coefficients_(std::move(coefficients)), residual_(residual) {}

  const FilterSpec& spec() const noexcept { return spec_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  Eigen::RowVectorXd row(int d) const { return coefficients_.row(d); }
  int window() const noexcept { return spec_.window; }
  /// Relative residual of the constraint system achieved by the solve.
  double residual() const noexcept { return residual_; }

 private:
  FilterSpec spec_;
  Eigen::MatrixXd coefficients_;  // (m + 1) x N
  double residual_;
};

/// Solves min ‖D‖_F subject to D A = B, with the exactness constraints
/// expressed in a Legendre basis on the window mapped to [-1, 1]; the
/// monomial normal matrix is Hilbert-like and unusable for large p.
///
/// Throws Error(rank) for p > N and ConditioningError when the achieved
/// residual exceeds kFilterSolveTolerance.
FilterWeights build_filter(const FilterSpec& spec);

/// Row d of the stencil contracted with `samples` (sample k at k·h).
double apply_filter(const FilterWeights& weights, std::span<const double> samples, int d);
inline double apply_filter(const FilterWeights& weights, std::span<const double> samples) {
  return apply_filter(weights, samples, weights.spec().derivative);
}

/// Spectral norm of the full (m + 1) x N coefficient matrix.
double operator_norm(const FilterWeights& weights);

struct FilterRates {
  double bias_order;   // (N h)^(p - d)
  double noise_order;  // N^(-d - 1/2) h^(-d)
};

/// Bias and noise rate expressions without their unspecified constants.
FilterRates theoretical_rates(const FilterSpec& spec);

namespace detail {
/// Values of the Legendre polynomials P_0..P_{p-1} and their derivatives up
/// to order m at s: result(q, j) = P_j^{(q)}(s).
Eigen::MatrixXd legendre_table(double s, int p, int m);
}  // namespace detail

}  // namespace lpiv
