#include "hsl/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsl/runtime.hpp"

namespace hsl {

namespace {

// w-space helpers on interior nodes (i = 1..m-2), w = r*u, homogeneous
// Dirichlet at both ends. T is the negative second difference, B = I - h^2/12 T.

struct WorkVectors {
  std::vector<double> a, b, c, d;
};

// y = (T + B diag(q)) x with zero Dirichlet neighbors
void apply_TBq(const std::vector<double>& q, double h, const std::vector<double>& x,
               std::vector<double>& y) {
  const int k = int(x.size());
  const double h2 = h * h;
  for (int i = 0; i < k; ++i) {
    const double xm = i > 0 ? x[i - 1] : 0.0;
    const double xp = i + 1 < k ? x[i + 1] : 0.0;
    const double qm = i > 0 ? q[i - 1] * xm : 0.0;
    const double qp = i + 1 < k ? q[i + 1] * xp : 0.0;
    y[i] = (-xm + 2 * x[i] - xp) / h2 + (qm + 10 * q[i] * x[i] + qp) / 12.0;
  }
}

// y = B x
void apply_B(const std::vector<double>& x, std::vector<double>& y) {
  const int k = int(x.size());
  for (int i = 0; i < k; ++i) {
    const double xm = i > 0 ? x[i - 1] : 0.0;
    const double xp = i + 1 < k ? x[i + 1] : 0.0;
    y[i] = (xm + 10 * x[i] + xp) / 12.0;
  }
}

// solve (T + B diag(q) - sigma B) x = rhs
void solve_shifted(const std::vector<double>& q, double sigma, double h,
                   std::vector<double>& rhs) {
  const int k = int(rhs.size());
  const double h2 = h * h;
  std::vector<double> a(k), b(k), c(k);
  for (int i = 0; i < k; ++i) {
    const double qm = i > 0 ? q[i - 1] - sigma : 0.0;
    const double qp = i + 1 < k ? q[i + 1] - sigma : 0.0;
    a[i] = i > 0 ? -1.0 / h2 + qm / 12.0 : 0.0;
    b[i] = 2.0 / h2 + 10.0 * (q[i] - sigma) / 12.0;
    c[i] = i + 1 < k ? -1.0 / h2 + qp / 12.0 : 0.0;
  }
  tridiag::solve(a, b, c, rhs);
}

double dot_dr(const std::vector<double>& x, const std::vector<double>& y, double h) {
  double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc * h;
}

}  // namespace

RadialEigenpair lowest_radial_eigenpair(const RadialProfile& phi) {
  const RadialGrid& g = phi.grid;
  const int m = g.m, k = m - 2;
  const double h = g.h;
  std::vector<double> q(k);
  for (int i = 0; i < k; ++i) q[i] = phi.v[i + 1];

  // start from a positive node-free profile
  std::vector<double> w(k), tmp(k), Bw(k);
  for (int i = 0; i < k; ++i) {
    const double r = g.r(i + 1);
    w[i] = r * std::exp(-0.25 * r * r);
  }

  double qmin = *std::min_element(q.begin(), q.end());
  double sigma = qmin - 1.0;  // strictly below the spectrum
  double eps = 0, eps_prev = 0;
  for (int it = 0; it < 120; ++it) {
    apply_B(w, Bw);
    std::vector<double> x = Bw;
    solve_shifted(q, sigma, h, x);
    const double nrm = std::sqrt(dot_dr(x, x, h));
    for (auto& xi : x) xi /= nrm;
    w = x;
    apply_TBq(q, h, w, tmp);
    apply_B(w, Bw);
    eps = dot_dr(w, tmp, h) / dot_dr(w, Bw, h);
    if (it > 6) sigma = eps;  // Rayleigh-quotient acceleration
    if (it > 2 && std::fabs(eps - eps_prev) < 1e-15 * std::max(1.0, std::fabs(eps)))
      break;
    eps_prev = eps;
  }

  RadialEigenpair out;
  out.eps = eps;
  out.u = RadialProfile(g);
  for (int i = 0; i < k; ++i) out.u.v[i + 1] = w[i] / g.r(i + 1);
  const double r1 = g.r(1), r2 = g.r(2);
  out.u.v[0] = (out.u.v[1] * r2 * r2 - out.u.v[2] * r1 * r1) / (r2 * r2 - r1 * r1);
  out.u.v[m - 1] = 0.0;
  const double nrm3d = std::sqrt(ip(out.u, out.u));
  double s = (out.u.v[0] >= 0 ? 1.0 : -1.0) / nrm3d;
  for (auto& x : out.u.v) x *= s;
  return out;
}

namespace {

// discrete residual of the frequency-1 system, relative to ||Q||_inf
double discrete_residual(const RadialProfile& Q, const RadialProfile& phi) {
  const RadialGrid& g = Q.grid;
  const int k = g.m - 2;
  const double h = g.h;
  std::vector<double> w(k), q(k), y(k), By(k);
  for (int i = 0; i < k; ++i) {
    w[i] = g.r(i + 1) * Q.v[i + 1];
    q[i] = 1.0 + phi.v[i + 1];
  }
  apply_TBq(q, h, w, y);
  // residual in u units: B^{-1} y / r
  std::vector<double> a(k), b(k), c(k);
  for (int i = 0; i < k; ++i) {
    a[i] = i > 0 ? 1.0 / 12.0 : 0.0;
    b[i] = 10.0 / 12.0;
    c[i] = i + 1 < k ? 1.0 / 12.0 : 0.0;
  }
  tridiag::solve(a, b, c, y);
  double mx = 0;
  for (int i = 0; i < k; ++i) mx = std::max(mx, std::fabs(y[i] / g.r(i + 1)));
  return mx / Q.max_abs();
}

}  // namespace

GroundState solve_ground_state(const RadialGrid& grid, double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-6))
    throw std::invalid_argument("solve_ground_state: tol must lie in [1e-12, 1e-6]");

  RadialProfile Q(grid);
  double mass = 100.0;
  {
    // Gaussian of the requested mass
    RadialProfile gauss(grid);
    for (int i = 0; i < grid.m; ++i)
      gauss.v[i] = std::exp(-0.25 * grid.r(i) * grid.r(i));
    const double nrm = std::sqrt(ip(gauss, gauss));
    for (int i = 0; i < grid.m; ++i) Q.v[i] = std::sqrt(mass) * gauss.v[i] / nrm;
  }

  RadialProfile rho(grid), phi(grid);
  const double omega = 0.7;
  double res = 1.0;
  int it = 0;
  const int max_iter = 400;
  for (; it < max_iter; ++it) {
    for (int i = 0; i < grid.m; ++i) rho.v[i] = Q.v[i] * Q.v[i];
    phi = radial_poisson(rho, 0);
    RadialEigenpair ep = lowest_radial_eigenpair(phi);
    if (ep.eps >= -1e-12) {
      // no bound state at this mass; deepen the well and retry
      for (auto& x : Q.v) x *= 2.0;
      continue;
    }
    const double mu = -ep.eps;
    const double mass_cur = ip(Q, Q);
    double factor = 1.0 / std::sqrt(mu);
    factor = std::clamp(factor, 0.5, 2.0);
    const double mass_next = mass_cur * factor;

    double delta = 0;
    const double qmax = Q.max_abs();
    const double amp = std::sqrt(mass_next);
    for (int i = 0; i < grid.m; ++i) {
      const double qn = amp * ep.u.v[i];
      delta = std::max(delta, std::fabs(qn - Q.v[i]));
      Q.v[i] += omega * (qn - Q.v[i]);
    }
    delta /= qmax;

    if (delta < 1e-4) {
      res = discrete_residual(Q, radial_poisson([&] {
              RadialProfile r2(grid);
              for (int i = 0; i < grid.m; ++i) r2.v[i] = Q.v[i] * Q.v[i];
              return r2;
            }(), 0));
      if (res <= tol) break;
    }
  }
  if (res > tol)
    throw SolverError("solve_ground_state: no convergence after " +
                      std::to_string(it) + " iterations, residual " +
                      std::to_string(res) + " > tol");

  for (int i = 0; i < grid.m; ++i) rho.v[i] = Q.v[i] * Q.v[i];
  phi = radial_poisson(rho, 0);

  double qmin = *std::min_element(Q.v.begin(), Q.v.end());
  if (qmin < -1e-12 * Q.max_abs())
    throw SolverError("solve_ground_state: negative lobe detected (wrong branch)");

  GroundState gs;
  gs.Q = Q;
  gs.phi = phi;
  gs.mass = ip(Q, Q);
  gs.g = gs.mass / (4.0 * M_PI);
  gs.ip_lambda = ip(lambda_op(Q), Q);
  RadialProfile dQ = derivative(Q);
  // (x_i Q, d_i Q) = (4pi/3) int Q Q' r^3 dr, identical per component
  double acc = 0;
  const auto wq = quadrature_weights(grid);
  for (int i = 0; i < grid.m; ++i) {
    const double r = grid.r(i);
    acc += wq[i] * Q.v[i] * dQ.v[i] * r * r * r;
  }
  const double per_comp = 4.0 * M_PI / 3.0 * acc;
  gs.ip_grad = {per_comp, per_comp, per_comp};
  gs.residual = res;
  gs.iterations = it;
  return gs;
}

PohozaevReport pohozaev_report(const GroundState& gs) {
  PohozaevReport rep;
  rep.lambda_dev = std::fabs(gs.ip_lambda / gs.mass - 0.5);
  for (int i = 0; i < 3; ++i)
    rep.grad_dev[i] = std::fabs(gs.ip_grad[i] / gs.mass + 0.5);
  return rep;
}

Field3D lift_to_box(const GroundState& gs, const Grid3D& grid, Vec3 center,
                    double lambda, Vec3 beta, double gamma) {
  if (!(lambda > 0)) throw std::invalid_argument("lift_to_box: lambda must be positive");
  // support check: soliton tail outside the box
  double dmin = grid.box;
  for (int d = 0; d < 3; ++d)
    dmin = std::min(dmin, 0.5 * grid.box - std::fabs(center[d]));
  if (dmin < 8.0 * lambda)
    log_info("lift_to_box: center within 8 decay lengths of a box face, tail mass may exceed 1e-10");

  RadialSpline spline(gs.Q);
  Field3D f(grid);
  const double inv_l2 = 1.0 / (lambda * lambda);
  parallel_chunks(std::size_t(grid.n) * grid.n, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const int iz = int(j / grid.n), iy = int(j % grid.n);
      const double z = grid.coord(iz) - center.z, y = grid.coord(iy) - center.y;
      for (int ix = 0; ix < grid.n; ++ix) {
        const double x = grid.coord(ix) - center.x;
        const double r = std::sqrt(x * x + y * y + z * z) / lambda;
        const double amp = inv_l2 * spline.eval(r);
        const double th = -gamma + beta.x * grid.coord(ix) + beta.y * (y + center.y) +
                          beta.z * (z + center.z);
        f.v[grid.idx(ix, iy, iz)] = amp * cplx(std::cos(th), std::sin(th));
      }
    }
  });
  return f;
}

ShootingResult shoot_ground_state(double r_end, double step) {
  // state y = (Q, Q', psi, psi'); Q'' = psi Q - (2/r) Q', psi'' = Q^2 - (2/r) psi'
  struct State {
    double q, dq, p, dp;
  };
  auto deriv = [](double r, const State& s) {
    State d;
    d.q = s.dq;
    d.dq = s.p * s.q - 2.0 / r * s.dq;
    d.p = s.dp;
    d.dp = s.q * s.q - 2.0 / r * s.dp;
    return d;
  };
  // outcome: +1 if Q grows beyond 2, -1 if Q crosses zero
  // also reports psi_inf extrapolation and the accumulated mass integral
  struct Run {
    int outcome = 0;
    double r_div = 0;
    double psi_inf = 0;
    double mass = 0;  // 4pi int Q^2 r^2 dr up to divergence
  };
  auto integrate = [&](double psi0, double snap_at) {
    Run run;
    const double r0 = 1e-4;
    State s;
    s.q = 1.0 + psi0 * r0 * r0 / 6.0;
    s.dq = psi0 * r0 / 3.0;
    s.p = psi0 + r0 * r0 / 6.0;
    s.dp = r0 / 3.0;
    double mass = 0;
    double snap_psi_inf = 0;
    bool snapped = false;
    for (double r = r0; r < r_end; r += step) {
      const State k1 = deriv(r, s);
      State s2{s.q + 0.5 * step * k1.q, s.dq + 0.5 * step * k1.dq,
               s.p + 0.5 * step * k1.p, s.dp + 0.5 * step * k1.dp};
      const State k2 = deriv(r + 0.5 * step, s2);
      State s3{s.q + 0.5 * step * k2.q, s.dq + 0.5 * step * k2.dq,
               s.p + 0.5 * step * k2.p, s.dp + 0.5 * step * k2.dp};
      const State k3 = deriv(r + 0.5 * step, s3);
      State s4{s.q + step * k3.q, s.dq + step * k3.dq, s.p + step * k3.p,
               s.dp + step * k3.dp};
      const State k4 = deriv(r + step, s4);
      s.q += step / 6.0 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q);
      s.dq += step / 6.0 * (k1.dq + 2 * k2.dq + 2 * k3.dq + k4.dq);
      s.p += step / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p);
      s.dp += step / 6.0 * (k1.dp + 2 * k2.dp + 2 * k3.dp + k4.dp);
      const double rn = r + step;
      mass += 4.0 * M_PI * s.q * s.q * rn * rn * step;
      if (!snapped && rn >= snap_at) {
        snap_psi_inf = s.p + rn * s.dp;
        snapped = true;
        run.mass = mass;
      }
      if (s.q < 0.0) {
        run.outcome = -1;
        run.r_div = rn;
        break;
      }
      if (s.q > 2.0) {
        run.outcome = +1;
        run.r_div = rn;
        break;
      }
    }
    if (run.outcome == 0) {
      run.outcome = (s.dq > 0 ? +1 : -1);
      run.r_div = r_end;
    }
    run.psi_inf = snapped ? snap_psi_inf : s.p + r_end * s.dp;
    if (!snapped) run.mass = mass;
    return run;
  };

  // bracket on psi0: scan downward until the outcome flips
  double hi = -0.05, lo = -0.05;
  const int out_hi = integrate(hi, r_end).outcome;
  int out_lo = out_hi;
  for (double p = -0.2; p > -40.0; p *= 1.5) {
    out_lo = integrate(p, r_end).outcome;
    if (out_lo != out_hi) {
      lo = p;
      break;
    }
    hi = p;
  }
  if (out_lo == out_hi)
    throw SolverError("shoot_ground_state: failed to bracket the ground branch");

  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const int o = integrate(mid, r_end).outcome;
    (o == out_lo ? lo : hi) = mid;
  }
  const double psi0 = 0.5 * (lo + hi);
  // take final data a bit before the inevitable divergence of the midpoint run
  Run probe = integrate(psi0, r_end);
  const double snap = std::min(r_end - 1.0, 0.85 * probe.r_div);
  Run fin = integrate(psi0, snap);

  ShootingResult res;
  res.psi0 = psi0;
  const double psi_inf = fin.psi_inf;
  if (!(psi_inf > 0))
    throw SolverError("shoot_ground_state: nonpositive asymptotic frequency");
  res.q0 = 1.0 / psi_inf;
  res.mass = fin.mass / std::sqrt(psi_inf);
  return res;
}

}  // namespace hsl
