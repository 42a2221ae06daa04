#pragma once

#include <vector>

namespace hsl {

// Uniform radial grid r_i = i*h, i = 0..m-1, h = r_max/(m-1).
struct RadialGrid {
  double r_max = 0;
  int m = 0;
  double h = 0;

  static RadialGrid make(double r_max, int m);
  double r(int i) const { return h * i; }
};

struct RadialProfile {
  RadialGrid grid;
  std::vector<double> v;

  RadialProfile() = default;
  explicit RadialProfile(const RadialGrid& g) : grid(g), v(g.m, 0.0) {}
  double max_abs() const;
};

// Gregory-corrected trapezoid weights (4th order, uniform interior).
std::vector<double> quadrature_weights(const RadialGrid& g);

// int_0^rmax f dr
double integrate(const RadialProfile& f);
// int_0^rmax f g r^2 dr
double integrate_r2(const RadialProfile& f, const RadialProfile& g);
// 3D inner product of radial functions: 4pi int f g r^2 dr
double ip(const RadialProfile& f, const RadialProfile& g);

// 4th-order finite-difference derivative on the grid
RadialProfile derivative(const RadialProfile& f);

// Generator of scalings, (Lambda f)(r) = 2 f + r f'
RadialProfile lambda_op(const RadialProfile& f);

// Free-space radial Poisson solves in Numerov form (w = r*phi variables,
// O(h^4), discretely consistent with the sector operators built on the
// same stencil).
//   l = 0:  phi'' + (2/r) phi' = rho,  phi ~ -(int rho s^2 ds)/r at r_max
//   l = 1:  v'' + (2/r) v' - 2 v/r^2 = rho,  v ~ -(int rho s^3 ds)/(3 r^2)
RadialProfile radial_poisson(const RadialProfile& rho, int ell);

// Clamped cubic spline (f'(0) = f'(r_max) = 0), evaluates 0 beyond r_max.
class RadialSpline {
 public:
  RadialSpline() = default;
  explicit RadialSpline(const RadialProfile& f);
  double eval(double r) const;
  double deriv(double r) const;

 private:
  RadialGrid grid_;
  std::vector<double> y_, y2_;  // values and second derivatives at nodes
};

namespace tridiag {
// Solves (a_i x_{i-1} + b_i x_i + c_i x_{i+1}) = d_i, i = 0..k-1 (a_0 and
// c_{k-1} ignored). Plain Thomas sweep; pivots are guarded against exact
// zeros so near-singular inverse-iteration solves stay finite.
void solve(const std::vector<double>& a, const std::vector<double>& b,
           const std::vector<double>& c, std::vector<double>& d);
}  // namespace tridiag

}  // namespace hsl
