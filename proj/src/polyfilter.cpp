#include "lpiv/polyfilter.hpp"

#include <cmath>
#include <sstream>

#include "lpiv/error.hpp"

namespace lpiv {

void FilterSpec::validate() const {
  if (window < 1) throw Error(ErrorKind::precondition, "filter window must be positive");
  if (!(step > 0.0) || !std::isfinite(step))
    throw Error(ErrorKind::precondition, "filter step must be positive and finite");
  if (exactness < 1) throw Error(ErrorKind::precondition, "exactness degree p must be >= 1");
  if (derivative < 0 || derivative > max_derivative)
    throw Error(ErrorKind::precondition, "derivative order must satisfy 0 <= d <= m");
  if (max_derivative >= exactness)
    throw Error(ErrorKind::precondition, "max derivative must satisfy m < p");
  if (!(location > 0.0 && location < window + 1.0)) {
    std::ostringstream msg;
    msg << "filter location " << location << " outside (0, " << window + 1 << ")";
    throw Error(ErrorKind::precondition, msg.str());
  }
  if (exactness > window) {
    std::ostringstream msg;
    msg << "constraint system has rank at most N = " << window << " < p = " << exactness;
    throw Error(ErrorKind::rank, msg.str());
  }
}

namespace detail {

Eigen::MatrixXd legendre_table(double s, int p, int m) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, p);
  t(0, 0) = 1.0;
  if (p > 1) {
    t(0, 1) = s;
    if (m >= 1) t(1, 1) = 1.0;
  }
  // (j+1) P_{j+1} = (2j+1) s P_j - j P_{j-1}, differentiated q times.
  for (int j = 1; j + 1 < p; ++j) {
    for (int q = 0; q <= m; ++q) {
      double lower = q > 0 ? t(q - 1, j) : 0.0;
      t(q, j + 1) = ((2.0 * j + 1.0) * (s * t(q, j) + q * lower) - j * t(q, j - 1)) / (j + 1.0);
    }
  }
  return t;
}

}  // namespace detail

FilterWeights build_filter(const FilterSpec& spec) {
  spec.validate();
  const int n = spec.window;
  const int p = spec.exactness;
  const int m = spec.max_derivative;

  // Affine map of the window [1, N] onto [-1, 1]; ds/dx = 2 / ((N - 1) h).
  const double half = n > 1 ? 0.5 * (n - 1) : 1.0;
  const double centre = 0.5 * (n + 1);
  const double ds_dx = 1.0 / (half * spec.step);

  Eigen::MatrixXd a(n, p);
  for (int k = 1; k <= n; ++k) {
    a.row(k - 1) = detail::legendre_table((k - centre) / half, p, 0).row(0);
  }
  Eigen::MatrixXd b = detail::legendre_table((spec.location - centre) / half, p, m);
  for (int q = 1; q <= m; ++q) b.row(q) *= std::pow(ds_dx, q);

  // D A = B with A = Q R Pᵀ (thin). The min-norm solution is D = B P R⁻¹ Qᵀ.
  // p <= N makes A full rank in exact arithmetic; numerical rank loss shows
  // up as a residual failure below.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  Eigen::MatrixXd bp = b * qr.colsPermutation();
  // Solve X R = B P  <=>  Rᵀ Xᵀ = (B P)ᵀ.
  Eigen::MatrixXd x = r.transpose().triangularView<Eigen::Lower>().solve(bp.transpose()).transpose();
  Eigen::MatrixXd d = x * q.transpose();

  const double residual = (d * a - b).norm() / b.norm();
  if (!(residual <= kFilterSolveTolerance)) {
    std::ostringstream msg;
    msg << "filter solve residual " << residual << " exceeds tolerance " << kFilterSolveTolerance
        << " (N=" << n << ", p=" << p << ")";
    throw ConditioningError(msg.str(), residual);
  }
  return FilterWeights(spec, std::move(d), residual);
}

double apply_filter(const FilterWeights& weights, std::span<const double> samples, int d) {
  if (static_cast<int>(samples.size()) != weights.window()) {
    std::ostringstream msg;
    msg << "expected " << weights.window() << " samples, got " << samples.size();
    throw Error(ErrorKind::dimension, msg.str());
  }
  if (d < 0 || d > weights.spec().max_derivative)
    throw Error(ErrorKind::dimension, "derivative row out of range");
  Eigen::Map<const Eigen::VectorXd> v(samples.data(), static_cast<Eigen::Index>(samples.size()));
  return weights.coefficients().row(d).dot(v);
}

double operator_norm(const FilterWeights& weights) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weights.coefficients());
  return svd.singularValues()(0);
}

FilterRates theoretical_rates(const FilterSpec& spec) {
  const double n = spec.window;
  const double h = spec.step;
  const int d = spec.derivative;
  return {std::pow(n * h, spec.exactness - d), std::pow(n, -d - 0.5) * std::pow(h, -d)};
}

}  // namespace lpiv
