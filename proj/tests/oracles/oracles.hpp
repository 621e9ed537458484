#pragma once
// Independent reference computations for the tests. Deliberately naive:
// plain arrays, long double, no Eigen and nothing from the library.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;

// Gauss-Jordan inverse with partial pivoting.
inline Matrix inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0L) throw std::runtime_error("singular");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const long double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c];
      if (f == 0.0L) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// Minimum-norm stencil for derivative d at location i0 (grid units) over
// samples k = 1..N spaced h, exact on monomials of degree < p. Uses the
// Vandermonde matrix in u = (k - i0) / N and D = B (AᵀA)⁻¹ Aᵀ.
inline std::vector<double> stencil(int N, double h, double i0, int d, int p) {
  Matrix a(N, std::vector<long double>(p));
  for (int k = 0; k < N; ++k) {
    const long double u = (static_cast<long double>(k + 1) - i0) / N;
    long double v = 1.0L;
    for (int j = 0; j < p; ++j) {
      a[k][j] = v;
      v *= u;
    }
  }
  // B_j = d^d/dt^d of u^j at u = 0 with u = (t/h - i0)/N.
  std::vector<long double> b(p, 0.0L);
  if (d < p) {
    long double fact = 1.0L;
    for (int q = 2; q <= d; ++q) fact *= q;
    b[d] = fact / std::pow(static_cast<long double>(N) * h, d);
  }
  Matrix ata(p, std::vector<long double>(p, 0.0L));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < N; ++k) ata[i][j] += a[k][i] * a[k][j];
  const Matrix g = inverse(ata);
  std::vector<long double> w(p, 0.0L);  // B (AᵀA)⁻¹
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) w[j] += b[i] * g[i][j];
  std::vector<double> out(N);
  for (int k = 0; k < N; ++k) {
    long double s = 0.0L;
    for (int j = 0; j < p; ++j) s += w[j] * a[k][j];
    out[k] = static_cast<double>(s);
  }
  return out;
}

using Vec3 = std::array<double, 3>;

inline Vec3 lorenz(double t, const Vec3& x) {
  const double pi = std::numbers::pi;
  return {10.0 * (x[1] - x[0]), x[0] * (28.0 - x[2]) - x[1],
          std::sin(2.0 * pi * t) + x[0] * x[1] - 8.0 / 3.0 * x[2]};
}

inline Vec3 rk4_step(double t, const Vec3& x, double dt) {
  auto axpy = [](const Vec3& a, double s, const Vec3& b) {
    return Vec3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  const Vec3 k1 = lorenz(t, x);
  const Vec3 k2 = lorenz(t + dt / 2, axpy(x, dt / 2, k1));
  const Vec3 k3 = lorenz(t + dt / 2, axpy(x, dt / 2, k2));
  const Vec3 k4 = lorenz(t + dt, axpy(x, dt, k3));
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = x[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

// ‖1 / (a + max(0, b - W))‖_r for W = |N(0, K²/2)| by composite Simpson
// quadrature of the half-normal density.
inline double lr_norm_halfnormal(double r, double a, double b, double K) {
  const double s = K / std::sqrt(2.0);
  const double upper = std::max(b, 0.0) + 12.0 * s;
  const int cells = 200000;
  const double dw = upper / cells;
  long double acc = 0.0L;
  for (int i = 0; i <= cells; ++i) {
    const double w = i * dw;
    const double dens = std::sqrt(2.0 / std::numbers::pi) / s * std::exp(-w * w / (2 * s * s));
    const double x = 1.0 / (a + std::max(0.0, b - w));
    const double wt = (i == 0 || i == cells) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += wt * dens * std::pow(x, r);
  }
  return std::pow(static_cast<double>(acc * dw / 3.0L), 1.0 / r);
}

}  // namespace oracle
