#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lpiv/dynamics.hpp"
#include "lpiv/error.hpp"
#include "lpiv/splitfilters.hpp"

using namespace lpiv;

namespace {

// Samples f at times (r + 1) h, r = 0..n-1, as a single column.
Eigen::MatrixXd sampled(long n, double h, auto&& f) {
  Eigen::MatrixXd m(n, 1);
  for (long r = 0; r < n; ++r) m(r, 0) = f((r + 1) * h);
  return m;
}

}  // namespace

TEST_CASE("bank parameters") {
  const auto bank = build_split_bank(Mode::continuous, 100, 0.001, 8);
  CHECK(bank.base_window == 100);
  CHECK(bank.span() == 200);
  const double c = 50.5;
  for (const FilterWeights* w : {&bank.hat_H, &bank.hat_G, &bank.tilde_G, &bank.hat_H_mirrored}) {
    CHECK(w->window() == 100);
    CHECK(w->spec().step == doctest::Approx(0.002));
    CHECK(w->spec().exactness == 8);
  }
  CHECK(bank.hat_H.spec().derivative == 1);
  CHECK(bank.hat_G.spec().derivative == 0);
  CHECK(bank.tilde_G.spec().derivative == 0);
  CHECK(bank.hat_G.spec().location == doctest::Approx(c - 0.25));
  CHECK(bank.hat_H.spec().location == doctest::Approx(c - 0.25));
  CHECK(bank.tilde_G.spec().location - bank.hat_G.spec().location == doctest::Approx(0.5));
  CHECK(bank.response_operator().tag == OperatorKind::Tag::derivative);
  CHECK(bank.response_operator().order == 1);
}

TEST_CASE("discrete hat_H sits one raw step after hat_G") {
  const auto bank = build_split_bank(Mode::discrete, 100, 0.001, 8);
  CHECK(bank.hat_H.spec().derivative == 0);
  // Half a step on the doubled grid is one raw step h.
  const double gap = bank.hat_H.spec().location - bank.hat_G.spec().location;
  CHECK(gap * bank.hat_H.spec().step == doctest::Approx(bank.base_step));
  CHECK(bank.response_operator().tag == OperatorKind::Tag::shift);
}

TEST_CASE("hat and tilde filters agree on a linear signal") {
  const auto bank = build_split_bank(Mode::continuous, 20, 0.01, 4);
  const auto y = sampled(40, 0.01, [](double t) { return t; });
  const auto d = assemble_design(y, bank, identity_features(1), {1e9, 1});
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    CHECK(std::abs(d.X(j, 0) - d.Z(j, 0)) < 1e-9);
    CHECK(std::abs(d.X(j, 0) - d.times(j)) < 1e-9);
    CHECK(std::abs(d.Y(j, 0) - 1.0) < 1e-9);
  }
}

TEST_CASE("polynomial trajectory: X, Z and Y agree with the analytic values") {
  auto f = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t * t - 0.3 * std::pow(t, 5); };
  auto df = [](double t) { return -2.0 + 1.5 * t * t - 1.5 * std::pow(t, 4); };
  const double h = 0.01;
  for (Mode mode : {Mode::continuous, Mode::discrete}) {
    const auto bank = build_split_bank(mode, 12, h, 8);
    const auto y = sampled(90, h, f);
    for (int stride : {1, 3}) {
      const auto d = assemble_design(y, bank, identity_features(1), {1e9, stride});
      CHECK(d.rows() == regression_count(90, bank, stride));
      for (Eigen::Index j = 0; j < d.rows(); ++j) {
        const double t = d.times(j);
        CHECK(std::abs(d.X(j, 0) - d.Z(j, 0) * (1.0 + std::abs(d.Z(j, 0)) / 1e9)) < 1e-6);
        CHECK(std::abs(d.X(j, 0) - f(t)) < 1e-6);
        const double expected = mode == Mode::continuous ? df(t) : f(t + h);
        CHECK(std::abs(d.Y(j, 0) - expected) < 1e-6);
      }
    }
  }
}

TEST_CASE("regression times and trailing samples") {
  const auto bank = build_split_bank(Mode::continuous, 10, 0.1, 3);
  const auto y = sampled(47, 0.1, [](double t) { return t; });
  const auto d = assemble_design(y, bank, identity_features(1), {200.0, 4});
  // Offsets 0, 4, ..., 24 fit in 47 samples; 28 + 20 > 47.
  CHECK(d.rows() == 7);
  CHECK(d.times(0) == doctest::Approx(10.5 * 0.1));
  CHECK(d.times(6) == doctest::Approx((24 + 10.5) * 0.1));
  CHECK(d.window_span == 20);
}

TEST_CASE("Z rows stay below mu on the Lorenz attractor") {
  const auto traj = integrate({}, {-8.0, 8.0, 27.0}, 1e-3, 20000, 10);
  const auto z = add_noise(traj, 0.1, 3);
  const auto bank = build_split_bank(Mode::continuous, 100, 1e-3, 75);
  const auto d = assemble_design(z.values, bank, lorenz_features(1.0), {200.0, 1});
  double max_x = 0.0, max_z = 0.0;
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    max_x = std::max(max_x, d.X.row(j).norm());
    max_z = std::max(max_z, d.Z.row(j).norm());
  }
  CHECK(max_x > 200.0);  // truncation is actually exercised
  CHECK(max_z < 200.0);
}

TEST_CASE("pure noise: responses are uncorrelated with instruments") {
  const int windows = 10000;
  const auto bank = build_split_bank(Mode::continuous, 8, 0.01, 4);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  Eigen::MatrixXd y(static_cast<Eigen::Index>(windows) * bank.span(), 2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = g(rng);
  // Non-overlapping windows give independent rows.
  const auto d = assemble_design(y, bank, identity_features(2), {200.0, bank.span()});
  REQUIRE(d.rows() == windows);
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < 2; ++k) {
      const Eigen::VectorXd a = d.Y.col(c).array() - d.Y.col(c).mean();
      const Eigen::VectorXd b = d.Z.col(k).array() - d.Z.col(k).mean();
      const double corr = a.dot(b) / (a.norm() * b.norm());
      CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(windows)));
    }
  }
}

TEST_CASE("odd-sample perturbations leave X and Y bit-identical") {
  const auto traj = integrate({}, {-8.0, 8.0, 27.0}, 1e-3, 3000, 10);
  const auto z = add_noise(traj, 1.0, 8);
  Eigen::MatrixXd bumped = z.values;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  // Raw row r holds sample r + 1, so even rows are odd-indexed samples.
  for (Eigen::Index r = 0; r < bumped.rows(); r += 2)
    for (Eigen::Index c = 0; c < 3; ++c) bumped(r, c) += g(rng);
  for (Mode mode : {Mode::continuous, Mode::discrete}) {
    const auto bank = build_split_bank(mode, 50, 1e-3, 20);
    for (int stride : {1, 2, 7}) {
      const auto a = assemble_design(z.values, bank, lorenz_features(1.0), {200.0, stride});
      const auto b = assemble_design(bumped, bank, lorenz_features(1.0), {200.0, stride});
      CHECK((a.X.array() == b.X.array()).all());
      CHECK((a.Y.array() == b.Y.array()).all());
      CHECK((a.Z.array() != b.Z.array()).any());
    }
  }
}

TEST_CASE("parallel assembly matches the serial reference") {
  const auto traj = integrate({}, {-8.0, 8.0, 27.0}, 1e-3, 4000, 10);
  const auto z = add_noise(traj, 0.1, 21);
  for (Mode mode : {Mode::continuous, Mode::discrete}) {
    const auto bank = build_split_bank(mode, 60, 1e-3, 30);
    for (int stride : {1, 5}) {
      const auto a = assemble_design(z.values, bank, lorenz_features(1.0), {200.0, stride});
      const auto b = assemble_design_serial(z.values, bank, lorenz_features(1.0), {200.0, stride});
      REQUIRE(a.rows() == b.rows());
      CHECK((a.X - b.X).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + b.X.cwiseAbs().maxCoeff()));
      CHECK((a.Y - b.Y).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + b.Y.cwiseAbs().maxCoeff()));
      CHECK((a.Z - b.Z).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + b.Z.cwiseAbs().maxCoeff()));
      CHECK((a.times.array() == b.times.array()).all());
    }
  }
}

TEST_CASE("hat/tilde consistency on a smooth signal") {
  const double h = 1e-3;
  const auto bank = build_split_bank(Mode::continuous, 100, h, 10);
  const auto y = sampled(600, h, [](double t) { return std::sin(5.0 * t); });
  const auto d = assemble_design(y, bank, identity_features(1), {1e300, 1});
  double worst_hat = 0.0, worst_gap = 0.0;
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    worst_hat = std::max(worst_hat, std::abs(d.X(j, 0) - std::sin(5.0 * d.times(j))));
    worst_gap = std::max(worst_gap, std::abs(d.X(j, 0) - d.Z(j, 0)));
  }
  CHECK(worst_gap <= 2.0 * std::max(worst_hat, 1e-13));
}

TEST_CASE("rho truncation") {
  CHECK(rho_truncate(Eigen::Vector3d::Zero(), 5.0).norm() == 0.0);
  const Eigen::Vector2d x(3.0, 4.0);
  const auto r = rho_truncate(x, 200.0);
  CHECK(r(0) == doctest::Approx(2.926829268292683).epsilon(1e-14));
  CHECK(r(1) == doctest::Approx(3.902439024390244).epsilon(1e-14));
  const auto half = rho_truncate(x, 5.0);
  CHECK(half(0) == doctest::Approx(1.5));
  CHECK(half(1) == doctest::Approx(2.0));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> expo(-3.0, 6.0);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd v(4);
    for (auto& e : v) e = g(rng) * std::pow(10.0, expo(rng));
    const double mu = std::pow(10.0, expo(rng));
    const auto out = rho_truncate(v, mu);
    CHECK(out.norm() < mu);
    CHECK(out.norm() <= v.norm());
    CHECK(std::abs(out.dot(v) - out.norm() * v.norm()) <= 1e-12 * out.norm() * v.norm());
  }
}

TEST_CASE("errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::io;
  };
  CHECK(kind_of([] { build_split_bank(Mode::continuous, 10, 0.1, 11); }) == ErrorKind::rank);
  CHECK(kind_of([] { build_split_bank(Mode::continuous, 1, 0.1, 1); }) == ErrorKind::precondition);
  CHECK(kind_of([] { build_split_bank(Mode::continuous, 10, 0.0, 3); }) == ErrorKind::precondition);
  CHECK(kind_of([] { parse_mode("hybrid"); }) == ErrorKind::config);
  const auto bank = build_split_bank(Mode::continuous, 10, 0.1, 3);
  const Eigen::MatrixXd short_series = Eigen::MatrixXd::Zero(19, 1);
  CHECK(kind_of([&] { assemble_design(short_series, bank, identity_features(1), {}); }) ==
        ErrorKind::empty_design);
  const Eigen::MatrixXd ok = Eigen::MatrixXd::Zero(40, 1);
  CHECK(kind_of([&] { assemble_design(ok, bank, identity_features(1), {0.0, 1}); }) ==
        ErrorKind::precondition);
  CHECK(kind_of([&] { assemble_design(ok, bank, identity_features(1), {1.0, 0}); }) ==
        ErrorKind::precondition);
}
