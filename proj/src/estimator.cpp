#include "lpiv/estimator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lpiv/error.hpp"

namespace lpiv {

void IvConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::precondition, "lambda must be positive");
  if (!(mu > 0.0)) throw Error(ErrorKind::precondition, "mu must be positive");
}

std::string_view to_string(Method method) { return method == Method::iv ? "iv" : "ls"; }

namespace {

void check_dimensions(const DesignMatrices& design, bool need_z) {
  const auto n = design.X.rows();
  if (n == 0) throw Error(ErrorKind::empty_design, "design has no regression rows");
  if (design.Y.rows() != n || (need_z && design.Z.rows() != n))
    throw Error(ErrorKind::input, "design matrices disagree on the number of rows");
  if (need_z && design.Z.cols() != design.X.cols())
    throw Error(ErrorKind::input, "Z and X must have the same number of columns");
}

}  // namespace

Eigen::MatrixXd clip_singular_values(const Eigen::MatrixXd& a, double lambda) {
  if (!a.allFinite()) throw Error(ErrorKind::input, "matrix has non-finite entries");
  if (!(lambda > 0.0)) throw Error(ErrorKind::precondition, "lambda must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index k = std::min(a.rows(), a.cols());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < k; ++i) s(i, i) = std::max(lambda, svd.singularValues()(i));
  return svd.matrixU() * s * svd.matrixV().transpose();
}

Estimate iv_estimate(const DesignMatrices& design, const IvConfig& config) {
  config.validate();
  check_dimensions(design, true);
  const Eigen::MatrixXd zx = design.Z.transpose() * design.X;
  const Eigen::MatrixXd zy = design.Z.transpose() * design.Y;
  if (!zx.allFinite() || !zy.allFinite())
    throw Error(ErrorKind::input, "design products have non-finite entries");

  // clip(A)⁻¹ = V diag(1 / max(lambda, sigma)) Uᵀ, so no explicit inverse is formed.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(zx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::VectorXd inv(sigma.size());
  int clipped = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) < config.lambda) ++clipped;
    inv(i) = 1.0 / std::max(config.lambda, sigma(i));
  }
  Estimate out;
  out.theta = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * zy);
  out.sigma_min_ZX = sigma(sigma.size() - 1);
  out.clipped_directions = clipped;
  out.method = Method::iv;
  return out;
}

Estimate ls_estimate(const DesignMatrices& design) {
  check_dimensions(design, false);
  const Eigen::MatrixXd& x = design.X;
  if (x.rows() < x.cols())
    throw SingularDesignError("fewer regression rows than features", 0.0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  // X P = Q R, so the singular values of X are those of R.
  const Eigen::MatrixXd r = qr.matrixR().topRows(x.cols()).triangularView<Eigen::Upper>();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(x.rows()) * smax;
  if (!(smin > tol)) {
    std::ostringstream msg;
    msg << "least-squares design is rank deficient: sigma_min(X) = " << smin;
    throw SingularDesignError(msg.str(), smin);
  }
  Estimate out;
  out.theta = qr.solve(design.Y);
  out.sigma_min_ZX = smin * smin;
  out.clipped_directions = 0;
  out.method = Method::ls;
  return out;
}

Excitation excitation_check(const DesignMatrices& design, double lambda) {
  check_dimensions(design, true);
  const Eigen::MatrixXd zx = design.Z.transpose() * design.X;
  const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(zx).singularValues();
  Excitation out;
  out.sigma_min = sigma.size() > 0 ? sigma(sigma.size() - 1) : 0.0;
  out.satisfied = out.sigma_min > lambda;
  out.margin = out.sigma_min - lambda;
  return out;
}

}  // namespace lpiv
