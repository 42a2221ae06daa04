#include "hsl/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsl {

RadialGrid RadialGrid::make(double r_max, int m) {
  if (!(r_max >= 20.0)) throw std::invalid_argument("RadialGrid: r_max must be >= 20");
  if (m < 2000) throw std::invalid_argument("RadialGrid: m must be >= 2000");
  RadialGrid g;
  g.r_max = r_max;
  g.m = m;
  g.h = r_max / (m - 1);
  return g;
}

double RadialProfile::max_abs() const {
  double mx = 0;
  for (double x : v) mx = std::max(mx, std::fabs(x));
  return mx;
}

std::vector<double> quadrature_weights(const RadialGrid& g) {
  std::vector<double> w(g.m, g.h);
  // Gregory end corrections, 4th order: 3/8, 7/6, 23/24 at each end
  w[0] = w[g.m - 1] = g.h * 3.0 / 8.0;
  w[1] = w[g.m - 2] = g.h * 7.0 / 6.0;
  w[2] = w[g.m - 3] = g.h * 23.0 / 24.0;
  return w;
}

double integrate(const RadialProfile& f) {
  const auto w = quadrature_weights(f.grid);
  double acc = 0;
  for (int i = 0; i < f.grid.m; ++i) acc += w[i] * f.v[i];
  return acc;
}

double integrate_r2(const RadialProfile& f, const RadialProfile& g) {
  const auto w = quadrature_weights(f.grid);
  double acc = 0;
  for (int i = 0; i < f.grid.m; ++i) {
    const double r = f.grid.r(i);
    acc += w[i] * f.v[i] * g.v[i] * r * r;
  }
  return acc;
}

double ip(const RadialProfile& f, const RadialProfile& g) {
  return 4.0 * M_PI * integrate_r2(f, g);
}

RadialProfile derivative(const RadialProfile& f) {
  const int m = f.grid.m;
  const double h = f.grid.h;
  RadialProfile d(f.grid);
  auto v = [&](int i) { return f.v[i]; };
  for (int i = 2; i < m - 2; ++i)
    d.v[i] = (-v(i + 2) + 8 * v(i + 1) - 8 * v(i - 1) + v(i - 2)) / (12 * h);
  // one-sided 4th order at the ends
  d.v[0] = (-25 * v(0) + 48 * v(1) - 36 * v(2) + 16 * v(3) - 3 * v(4)) / (12 * h);
  d.v[1] = (-3 * v(0) - 10 * v(1) + 18 * v(2) - 6 * v(3) + v(4)) / (12 * h);
  d.v[m - 2] = (3 * v(m - 1) + 10 * v(m - 2) - 18 * v(m - 3) + 6 * v(m - 4) - v(m - 5)) / (12 * h);
  d.v[m - 1] = (25 * v(m - 1) - 48 * v(m - 2) + 36 * v(m - 3) - 16 * v(m - 4) + 3 * v(m - 5)) / (12 * h);
  return d;
}

RadialProfile lambda_op(const RadialProfile& f) {
  RadialProfile d = derivative(f);
  RadialProfile out(f.grid);
  for (int i = 0; i < f.grid.m; ++i) out.v[i] = 2.0 * f.v[i] + f.grid.r(i) * d.v[i];
  return out;
}

namespace tridiag {

void solve(const std::vector<double>& a, const std::vector<double>& b,
           const std::vector<double>& c, std::vector<double>& d) {
  const int k = int(b.size());
  std::vector<double> cp(k);
  double piv = b[0];
  if (piv == 0.0) piv = 1e-300;
  cp[0] = c[0] / piv;
  d[0] /= piv;
  for (int i = 1; i < k; ++i) {
    piv = b[i] - a[i] * cp[i - 1];
    if (piv == 0.0) piv = 1e-300;
    cp[i] = c[i] / piv;
    d[i] = (d[i] - a[i] * d[i - 1]) / piv;
  }
  for (int i = k - 2; i >= 0; --i) d[i] -= cp[i] * d[i + 1];
}

}  // namespace tridiag

RadialProfile radial_poisson(const RadialProfile& rho, int ell) {
  if (ell != 0 && ell != 1) throw std::invalid_argument("radial_poisson: ell must be 0 or 1");
  const RadialGrid& g = rho.grid;
  const int m = g.m;
  const double h = g.h, h2 = h * h;

  // moment for the decaying boundary value
  const auto w = quadrature_weights(g);
  double mom = 0;
  for (int i = 0; i < m; ++i) {
    const double r = g.r(i);
    mom += w[i] * rho.v[i] * (ell == 0 ? r * r : r * r * r);
  }
  const double w_end = (ell == 0) ? -mom : -mom / (3.0 * g.r_max);

  // (T + B q) x = -B (r rho) on interior nodes, q = ell(ell+1)/r^2,
  // with x_0 = 0 and x_{m-1} = w_end folded into the right side.
  const int k = m - 2;
  std::vector<double> a(k), b(k), c(k), d(k);
  auto q = [&](int node) {
    const double r = g.r(node);
    return ell == 0 ? 0.0 : 2.0 / (r * r);
  };
  auto f = [&](int node) { return g.r(node) * rho.v[node]; };
  for (int i = 0; i < k; ++i) {
    const int node = i + 1;
    a[i] = -1.0 / h2 + q(node - 1) / 12.0;
    b[i] = 2.0 / h2 + 10.0 * q(node) / 12.0;
    c[i] = -1.0 / h2 + q(node + 1) / 12.0;
    d[i] = -(f(node - 1) + 10.0 * f(node) + f(node + 1)) / 12.0;
  }
  // fold boundary values (x_0 = 0 contributes nothing)
  d[k - 1] -= c[k - 1] * w_end;
  c[k - 1] = 0;
  tridiag::solve(a, b, c, d);

  RadialProfile phi(g);
  for (int i = 0; i < k; ++i) phi.v[i + 1] = d[i] / g.r(i + 1);
  phi.v[m - 1] = w_end / g.r_max;
  if (ell == 0) {
    // even function: fit a + b r^2 through nodes 1 and 2, take the value at 0
    const double r1 = g.r(1), r2 = g.r(2);
    phi.v[0] = (phi.v[1] * r2 * r2 - phi.v[2] * r1 * r1) / (r2 * r2 - r1 * r1);
  } else {
    phi.v[0] = 0.0;
  }
  return phi;
}

RadialSpline::RadialSpline(const RadialProfile& f) : grid_(f.grid), y_(f.v) {
  const int m = grid_.m;
  const double h = grid_.h;
  // clamped spline, f'(0) = f'(rmax) = 0
  std::vector<double> a(m), b(m), c(m), d(m);
  b[0] = 2 * h;
  c[0] = h;
  d[0] = 6.0 * ((y_[1] - y_[0]) / h - 0.0);
  for (int i = 1; i < m - 1; ++i) {
    a[i] = h;
    b[i] = 4 * h;
    c[i] = h;
    d[i] = 6.0 * ((y_[i + 1] - y_[i]) / h - (y_[i] - y_[i - 1]) / h);
  }
  a[m - 1] = h;
  b[m - 1] = 2 * h;
  d[m - 1] = 6.0 * (0.0 - (y_[m - 1] - y_[m - 2]) / h);
  tridiag::solve(a, b, c, d);
  y2_ = std::move(d);
}

double RadialSpline::eval(double r) const {
  if (r < 0) r = -r;
  if (r >= grid_.r_max) return 0.0;
  const double h = grid_.h;
  int i = std::min(int(r / h), grid_.m - 2);
  const double xa = grid_.r(i);
  const double A = (grid_.r(i + 1) - r) / h, B = 1.0 - A;
  (void)xa;
  return A * y_[i] + B * y_[i + 1] +
         ((A * A * A - A) * y2_[i] + (B * B * B - B) * y2_[i + 1]) * h * h / 6.0;
}

double RadialSpline::deriv(double r) const {
  double sign = 1.0;
  if (r < 0) {
    r = -r;
    sign = -1.0;
  }
  if (r >= grid_.r_max) return 0.0;
  const double h = grid_.h;
  int i = std::min(int(r / h), grid_.m - 2);
  const double A = (grid_.r(i + 1) - r) / h, B = 1.0 - A;
  const double d = (y_[i + 1] - y_[i]) / h +
                   (-(3 * A * A - 1) * y2_[i] + (3 * B * B - 1) * y2_[i + 1]) * h / 6.0;
  return sign * d;
}

}  // namespace hsl
