#include "lpiv/splitfilters.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lpiv/error.hpp"

namespace lpiv {

std::string_view to_string(Mode mode) {
  return mode == Mode::continuous ? "continuous" : "discrete";
}

Mode parse_mode(std::string_view text) {
  if (text == "continuous") return Mode::continuous;
  if (text == "discrete") return Mode::discrete;
  throw Error(ErrorKind::config, "unknown mode '" + std::string(text) + "'");
}

OperatorKind SplitFilterBank::response_operator() const {
  if (mode == Mode::continuous) return {OperatorKind::Tag::derivative, 1};
  return {OperatorKind::Tag::shift, 1};
}

namespace {

FilterWeights split_filter(int window, double step, double location, int d, int p) {
  FilterSpec spec;
  spec.window = window;
  spec.step = step;
  spec.location = location;
  spec.derivative = d;
  spec.max_derivative = d;
  spec.exactness = p;
  return build_filter(spec);
}

}  // namespace

SplitFilterBank build_split_bank(Mode mode, int window, double step, int exactness) {
  if (window < 2) throw Error(ErrorKind::precondition, "split window must be at least 2");
  if (!(step > 0.0)) throw Error(ErrorKind::precondition, "step must be positive");
  if (exactness > window) {
    std::ostringstream msg;
    msg << "exactness p = " << exactness << " exceeds split window N = " << window;
    throw Error(ErrorKind::rank, msg.str());
  }
  const double centre = 0.5 * (1.0 + window);
  const double wide = 2.0 * step;
  const double lead = centre - 0.25;
  const double lag = centre + 0.25;

  FilterWeights hat_G = split_filter(window, wide, lead, 0, exactness);
  FilterWeights tilde_G = split_filter(window, wide, lag, 0, exactness);
  if (mode == Mode::continuous) {
    return SplitFilterBank{split_filter(window, wide, lead, 1, exactness), std::move(hat_G),
                           std::move(tilde_G), split_filter(window, wide, lag, 1, exactness),
                           mode, window, step};
  }
  // One raw step later is half a step on the doubled grid.
  return SplitFilterBank{split_filter(window, wide, lead + 0.5, 0, exactness), std::move(hat_G),
                         std::move(tilde_G), split_filter(window, wide, lag + 0.5, 0, exactness),
                         mode, window, step};
}

FeatureMap identity_features(int state_dim) {
  return FeatureMap{state_dim, [](double, std::span<const double> state, std::span<double> out) {
                      for (std::size_t i = 0; i < state.size(); ++i) out[i] = state[i];
                    }};
}

Eigen::VectorXd rho_truncate(const Eigen::Ref<const Eigen::VectorXd>& x, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::precondition, "mu must be positive");
  return x / (1.0 + x.norm() / mu);
}

Eigen::Index regression_count(Eigen::Index samples, const SplitFilterBank& bank, int stride) {
  const Eigen::Index span = bank.span();
  if (samples < span || stride < 1) return 0;
  return (samples - span) / stride + 1;
}

namespace {

void check_design_inputs(const Eigen::MatrixXd& measurements, const SplitFilterBank& bank,
                         const FeatureMap& features, const DesignOptions& options) {
  if (!(options.mu > 0.0)) throw Error(ErrorKind::precondition, "mu must be positive");
  if (options.stride < 1) throw Error(ErrorKind::precondition, "stride must be >= 1");
  if (measurements.cols() < 1) throw Error(ErrorKind::dimension, "measurements have no columns");
  if (features.dim < 1 || !features.eval)
    throw Error(ErrorKind::precondition, "feature map is empty");
  if (measurements.rows() < bank.span()) {
    std::ostringstream msg;
    msg << measurements.rows() << " samples cannot fill one regression window of "
        << bank.span();
    throw Error(ErrorKind::empty_design, msg.str());
  }
}

struct WindowPlan {
  const FilterWeights* response;
  const FilterWeights* regressor;
  const FilterWeights* instrument;
  Eigen::Index hat_first;    // first raw row read by the hat filters
  Eigen::Index tilde_first;  // first raw row read by the tilde filter
};

// Rows r with r + 1 even (globally even-indexed samples) go to the hat filters.
WindowPlan plan_window(const SplitFilterBank& bank, Eigen::Index offset) {
  if (offset % 2 == 0) return {&bank.hat_H, &bank.hat_G, &bank.tilde_G, offset + 1, offset};
  return {&bank.hat_H_mirrored, &bank.tilde_G, &bank.hat_G, offset, offset + 1};
}

DesignMatrices allocate(Eigen::Index rows, Eigen::Index dy, int dphi, int span) {
  DesignMatrices out;
  out.X.resize(rows, dphi);
  out.Y.resize(rows, dy);
  out.Z.resize(rows, dphi);
  out.times.resize(rows);
  out.window_span = span;
  return out;
}

}  // namespace

DesignMatrices assemble_design(const Eigen::MatrixXd& measurements, const SplitFilterBank& bank,
                               const FeatureMap& features, const DesignOptions& options) {
  check_design_inputs(measurements, bank, features, options);
  const Eigen::Index rows = regression_count(measurements.rows(), bank, options.stride);
  const Eigen::Index dy = measurements.cols();
  const int dphi = features.dim;
  const int n = bank.base_window;
  const double h = bank.base_step;
  DesignMatrices out = allocate(rows, dy, dphi, bank.span());

  using Strided = Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<2>>;

#pragma omp parallel
  {
    Eigen::VectorXd hat_state(dy), tilde_state(dy), phi(dphi);
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < rows; ++j) {
      const Eigen::Index offset = j * options.stride;
      const WindowPlan plan = plan_window(bank, offset);
      const double t = (static_cast<double>(offset) + n + 0.5) * h;
      const auto response_row = plan.response->coefficients().row(plan.response->spec().derivative);
      for (Eigen::Index c = 0; c < dy; ++c) {
        const double* column = measurements.col(c).data();
        Strided hat(column + plan.hat_first, n);
        Strided tilde(column + plan.tilde_first, n);
        out.Y(j, c) = response_row.dot(hat);
        hat_state(c) = plan.regressor->coefficients().row(0).dot(hat);
        tilde_state(c) = plan.instrument->coefficients().row(0).dot(tilde);
      }
      features.eval(t, {hat_state.data(), static_cast<std::size_t>(dy)},
                    {phi.data(), static_cast<std::size_t>(dphi)});
      out.X.row(j) = phi.transpose();
      features.eval(t, {tilde_state.data(), static_cast<std::size_t>(dy)},
                    {phi.data(), static_cast<std::size_t>(dphi)});
      out.Z.row(j) = (phi / (1.0 + phi.norm() / options.mu)).transpose();
      out.times(j) = t;
    }
  }
  return out;
}

DesignMatrices assemble_design_serial(const Eigen::MatrixXd& measurements,
                                      const SplitFilterBank& bank, const FeatureMap& features,
                                      const DesignOptions& options) {
  check_design_inputs(measurements, bank, features, options);
  const Eigen::Index rows = regression_count(measurements.rows(), bank, options.stride);
  const Eigen::Index dy = measurements.cols();
  const int n = bank.base_window;
  DesignMatrices out = allocate(rows, dy, features.dim, bank.span());

  std::vector<double> hat(n), tilde(n), hat_state(dy), tilde_state(dy), phi(features.dim);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const Eigen::Index offset = j * options.stride;
    const WindowPlan plan = plan_window(bank, offset);
    const double t = (static_cast<double>(offset) + n + 0.5) * bank.base_step;
    for (Eigen::Index c = 0; c < dy; ++c) {
      for (int k = 0; k < n; ++k) {
        hat[k] = measurements(plan.hat_first + 2 * k, c);
        tilde[k] = measurements(plan.tilde_first + 2 * k, c);
      }
      out.Y(j, c) = apply_filter(*plan.response, hat);
      hat_state[c] = apply_filter(*plan.regressor, hat, 0);
      tilde_state[c] = apply_filter(*plan.instrument, tilde, 0);
    }
    features.eval(t, hat_state, phi);
    for (int f = 0; f < features.dim; ++f) out.X(j, f) = phi[f];
    features.eval(t, tilde_state, phi);
    Eigen::Map<Eigen::VectorXd> v(phi.data(), features.dim);
    out.Z.row(j) = rho_truncate(v, options.mu).transpose();
    out.times(j) = t;
  }
  return out;
}

}  // namespace lpiv
