#include <doctest.h>

#include <cmath>

#include "lpiv/bounds.hpp"
#include "lpiv/error.hpp"
#include "oracles/oracles.hpp"

using namespace lpiv;

TEST_CASE("head term is 2/b") {
  for (double r : {1.0, 2.0, 5.0})
    for (double K : {0.1, 1.0, 3.0}) CHECK(gamma({r, 1.0, 4.0, K}).head == 0.5);
}

TEST_CASE("tail term at b = K, r = 1") {
  CHECK(gamma({1.0, 1.0, 3.0, 3.0}).tail == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  for (double K : {0.5, 2.0, 7.0})
    CHECK(gamma({1.0, 0.25 * K, K, K}).tail * 0.25 * K == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("head dominates when b is many K away") {
  const auto g = gamma({2.0, 1.0, 10.0, 1.0});
  // The tail is exponentially small; the body only decays like b^(-3) at r = 2.
  CHECK(g.tail <= 1e-3 * g.head);
  const double body = std::sqrt(2.0 * std::sqrt(std::numbers::pi)) / 1000.0 *
                      std::exp(9.0 * std::pow(std::log(0.1), 2) / (8.0 * 81.0));
  CHECK(g.body == doctest::Approx(body).epsilon(1e-13));
  CHECK(g.total - g.head <= 1.1e-2 * g.head);
  CHECK(g.total == g.head + g.body + g.tail);
  CHECK(g.body >= 0.0);
  CHECK(g.tail >= 0.0);
}

TEST_CASE("body term by direct evaluation") {
  const double r = 3.0, a = 0.5, b = 2.0, K = 1.5;
  const double expected = std::pow(r * K * std::sqrt(std::numbers::pi), 1.0 / r) /
                          std::pow(b, 2.0 * (1.0 + 1.0 / r)) *
                          std::exp(K * K * (r + 1) * (r + 1) * std::pow(std::log(a / b), 2) /
                                   (4.0 * r * (b - a) * (b - a)));
  CHECK(gamma({r, a, b, K}).body == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("monotonicity on grids") {
  for (double r : {1.0, 2.0, 4.0}) {
    for (double a : {0.1, 1.0}) {
      for (double K : {0.3, 1.0, 3.0}) {
        double last = INFINITY;
        for (double b = a * 1.5; b < 200.0; b *= 1.3) {
          const double total = gamma({r, a, b, K}).total;
          CHECK(total <= last * (1.0 + 1e-12));
          last = total;
        }
      }
      for (double b : {2.0, 5.0, 20.0}) {
        double last = 0.0;
        for (double K = 0.1; K < 10.0; K *= 1.4) {
          const double total = gamma({r, a, b, K}).total;
          CHECK(total >= last * (1.0 - 1e-12));
          last = total;
        }
        // Tail grows as the floor a shrinks.
        double tail_last = 0.0;
        for (double aa = 0.9; aa > 1e-3; aa *= 0.5) {
          const double tail = gamma({r, aa, b, 1.0}).tail;
          CHECK(tail >= tail_last);
          tail_last = tail;
        }
      }
    }
  }
}

TEST_CASE("Monte Carlo check: concentrated regime") {
  const GammaParams p{2.0, 1.0, 40.0, 2.0};
  const auto c = mc_check_gamma(p, 1000000, 7);
  CHECK(std::abs(c.empirical_Lr - 1.0 / p.b) <= 0.02 / p.b);
  CHECK(c.ratio <= 1.0);
}

TEST_CASE("Monte Carlo check: W almost always beyond b") {
  const GammaParams p{2.0, 1.0, 2.0, 100.0};
  const auto c = mc_check_gamma(p, 100000, 8);
  CHECK(c.empirical_Lr <= 1.0 / p.a);
  CHECK(c.empirical_Lr >= 0.95 / p.a);
  CHECK(c.ratio <= 1.0);
}

TEST_CASE("Monte Carlo agrees with quadrature") {
  for (const GammaParams& p : {GammaParams{1.0, 0.5, 3.0, 2.0}, GammaParams{3.0, 0.2, 1.0, 1.0}}) {
    const auto c = mc_check_gamma(p, 400000, 11);
    const double q = oracle::lr_norm_halfnormal(p.r, p.a, p.b, p.K);
    CHECK(c.empirical_Lr == doctest::Approx(q).epsilon(0.01));
    CHECK(q <= gamma(p).total);
  }
}

TEST_CASE("parallel and serial oracles agree exactly") {
  const GammaParams p{2.5, 0.3, 4.0, 1.7};
  const auto a = mc_check_gamma(p, 50001, 99);
  const auto b = mc_check_gamma_serial(p, 50001, 99);
  CHECK(a.empirical_Lr == b.empirical_Lr);
  CHECK(a.ratio == b.ratio);
}

TEST_CASE("Hölder order") {
  CHECK(holder_order(2.0) == 4.0);
  CHECK(holder_order(2.0, 0.5) == 6.0);
  CHECK_THROWS_AS(holder_order(2.0, 0.0), Error);
}

TEST_CASE("corollary rate") {
  const double expected = std::pow(10.0, -0.6) + std::pow(10.0, -1.3);
  CHECK(corollary_rate(1e5, 1e-3, 2, 1) == doctest::Approx(expected).epsilon(1e-14));
  for (double h : {1e-2, 1e-3, 1e-4})
    for (int p : {2, 5, 75})
      CHECK(corollary_rate(1e5, h, p, 0) <= corollary_rate(1e5, h, p, 1));
  double last = INFINITY;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const double rate = corollary_rate(std::pow(h, -3.0), h, 2, 1);
    CHECK(rate > 0.0);
    CHECK(rate < last);
    last = rate;
  }
  CHECK(last < 0.2);
}

TEST_CASE("ideal window") {
  CHECK(ideal_window(1e-3, 2) == doctest::Approx(std::pow(10.0, 2.4)).epsilon(1e-14));
  CHECK(ideal_window(1e-3, 2) == doctest::Approx(251.19).epsilon(1e-4));
  CHECK(ideal_window(1e-3, 5000) * 1e-3 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ideal_window(1e-3, 75) / 100.0 > 9.0);  // the benchmark window is far below the balance point
}

TEST_CASE("domain errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::io;
  };
  CHECK(kind_of([] { gamma({2.0, 3.0, 1.0, 1.0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { gamma({2.0, 1.0, 1.0, 1.0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { gamma({0.5, 1.0, 2.0, 1.0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { gamma({2.0, 1.0, 2.0, 0.0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { mc_check_gamma({2.0, 1.0, 2.0, 1.0}, 100, 1); }) == ErrorKind::precondition);
  CHECK(kind_of([] { ideal_window(1.5, 2); }) == ErrorKind::domain);
  CHECK(kind_of([] { corollary_rate(1e5, 1e-3, 2, 2); }) == ErrorKind::domain);
}
