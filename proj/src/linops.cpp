#include "hsl/linops.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "hsl/runtime.hpp"

namespace hsl {

namespace {

using vec = std::vector<double>;

double dot_v(const vec& a, const vec& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double nrm2(const vec& a) { return std::sqrt(dot_v(a, a)); }

// Left-preconditioned restarted GMRES. Returns iteration count; solves
// op(x) = b to tol relative (in the preconditioned norm).
int gmres(const std::function<void(const vec&, vec&)>& op,
          const std::function<void(vec&)>& prec, const vec& b, vec& x,
          double tol, int restart, int maxit) {
  const int n = int(b.size());
  vec r = b, tmp(n);
  x.assign(n, 0.0);
  prec(r);
  const double b_norm = nrm2(r);
  if (b_norm == 0) return 0;

  int total = 0;
  std::vector<vec> V;
  std::vector<double> cs(restart + 1), sn(restart + 1), s(restart + 1);
  std::vector<vec> H;  // H[i] has i+2 entries
  while (total < maxit) {
    // restart with the current residual
    op(x, tmp);
    for (int i = 0; i < n; ++i) tmp[i] = b[i] - tmp[i];
    prec(tmp);
    double beta = nrm2(tmp);
    if (beta / b_norm < tol) return total;
    V.assign(1, tmp);
    for (auto& vi : V[0]) vi /= beta;
    std::fill(s.begin(), s.end(), 0.0);
    s[0] = beta;
    H.clear();

    int j = 0;
    for (; j < restart && total < maxit; ++j, ++total) {
      op(V[j], tmp);
      prec(tmp);
      H.emplace_back(j + 2, 0.0);
      for (int i = 0; i <= j; ++i) {
        H[j][i] = dot_v(tmp, V[i]);
        for (int kk = 0; kk < n; ++kk) tmp[kk] -= H[j][i] * V[i][kk];
      }
      H[j][j + 1] = nrm2(tmp);
      if (H[j][j + 1] > 0) {
        V.push_back(tmp);
        for (auto& vi : V.back()) vi /= H[j][j + 1];
      } else {
        V.push_back(vec(n, 0.0));
      }
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H[j][i] + sn[i] * H[j][i + 1];
        H[j][i + 1] = -sn[i] * H[j][i] + cs[i] * H[j][i + 1];
        H[j][i] = t;
      }
      const double denom = std::hypot(H[j][j], H[j][j + 1]);
      cs[j] = denom > 0 ? H[j][j] / denom : 1.0;
      sn[j] = denom > 0 ? H[j][j + 1] / denom : 0.0;
      H[j][j] = denom;
      H[j][j + 1] = 0.0;
      s[j + 1] = -sn[j] * s[j];
      s[j] = cs[j] * s[j];
      if (std::fabs(s[j + 1]) / b_norm < tol) {
        ++j;
        ++total;
        break;
      }
    }
    // back-substitute and update x
    vec y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double acc = s[i];
      for (int kk = i + 1; kk < j; ++kk) acc -= H[kk][i] * y[kk];
      y[i] = acc / H[i][i];
    }
    for (int i = 0; i < j; ++i)
      for (int kk = 0; kk < n; ++kk) x[kk] += y[i] * V[i][kk];
  }
  return total;
}

}  // namespace

LinearizedOps::LinearizedOps(const GroundState& gs)
    : grid_(gs.Q.grid), Q_(gs.Q), phi_(gs.phi), dQ_(derivative(gs.Q)) {}

RadialProfile LinearizedOps::apply(const RadialProfile& u, Sector s, bool plus) const {
  if (!(u.grid.m == grid_.m)) throw std::invalid_argument("linops: grid mismatch");
  const int m = grid_.m, k = m - 2;
  const double h = grid_.h;
  const int ell = int(s);

  vec w(k), y(k);
  for (int i = 0; i < k; ++i) w[i] = grid_.r(i + 1) * u.v[i + 1];
  // y = B^{-1} (T w)
  for (int i = 0; i < k; ++i) {
    const double wm = i > 0 ? w[i - 1] : 0.0;
    const double wp = i + 1 < k ? w[i + 1] : 0.0;
    y[i] = (-wm + 2 * w[i] - wp) / (h * h);
  }
  {
    vec a(k), b(k), c(k);
    for (int i = 0; i < k; ++i) {
      a[i] = i > 0 ? 1.0 / 12.0 : 0.0;
      b[i] = 10.0 / 12.0;
      c[i] = i + 1 < k ? 1.0 / 12.0 : 0.0;
    }
    tridiag::solve(a, b, c, y);
  }
  RadialProfile out(grid_);
  for (int i = 0; i < k; ++i) {
    const double r = grid_.r(i + 1);
    const double g = 1.0 + phi_.v[i + 1] + ell * (ell + 1) / (r * r);
    out.v[i + 1] = y[i] / r + g * u.v[i + 1];
  }
  if (plus) {
    RadialProfile dens(grid_);
    for (int i = 0; i < m; ++i) dens.v[i] = Q_.v[i] * u.v[i];
    RadialProfile pot = radial_poisson(dens, ell);
    for (int i = 1; i < m - 1; ++i) out.v[i] += 2.0 * pot.v[i] * Q_.v[i];
  }
  if (ell == 0) {
    const double r1 = grid_.r(1), r2 = grid_.r(2);
    out.v[0] = (out.v[1] * r2 * r2 - out.v[2] * r1 * r1) / (r2 * r2 - r1 * r1);
  } else {
    out.v[0] = 0.0;
  }
  out.v[m - 1] = 0.0;
  return out;
}

RadialProfile LinearizedOps::apply_Lplus(const RadialProfile& u, Sector s) const {
  return apply(u, s, true);
}

RadialProfile LinearizedOps::apply_Lminus(const RadialProfile& u, Sector s) const {
  return apply(u, s, false);
}

RadialProfile LinearizedOps::solve(const RadialProfile& f, Sector s, bool plus,
                                   SolveReport* rep) const {
  const int m = grid_.m, k = m - 2;
  const double h = grid_.h;
  const int ell = int(s);

  const bool has_kernel = (!plus && s == Sector::Radial) || (plus && s == Sector::Dipole);
  vec kern;
  if (has_kernel) {
    const RadialProfile& kp = plus ? dQ_ : Q_;
    kern.resize(k);
    for (int i = 0; i < k; ++i) kern[i] = grid_.r(i + 1) * kp.v[i + 1];
    const double nk = nrm2(kern);
    for (auto& x : kern) x /= nk;
    // solvability in the physical pairing
    const RadialProfile& kprof = plus ? dQ_ : Q_;
    const double pair = ip(f, kprof);
    const double rel = std::fabs(pair) /
                       (std::sqrt(ip(f, f)) * std::sqrt(ip(kprof, kprof)) + 1e-300);
    if (rep) rep->solvability = rel;
    if (rel > 1e-6)
      throw SolverError(std::string("linops::solve: solvability violated, (f, ") +
                        (plus ? "gradQ" : "Q") + ") relative " + std::to_string(rel));
  }

  vec b(k);
  for (int i = 0; i < k; ++i) b[i] = grid_.r(i + 1) * f.v[i + 1];
  if (has_kernel) {
    const double c = dot_v(b, kern);
    for (int i = 0; i < k; ++i) b[i] -= c * kern[i];
  }

  // operator in w variables: B^{-1} T + diag(g) + nonlocal (+ kernel shift)
  auto op = [&](const vec& x, vec& y) {
    y.resize(k);
    for (int i = 0; i < k; ++i) {
      const double xm = i > 0 ? x[i - 1] : 0.0;
      const double xp = i + 1 < k ? x[i + 1] : 0.0;
      y[i] = (-xm + 2 * x[i] - xp) / (h * h);
    }
    vec a2(k), b2(k), c2(k);
    for (int i = 0; i < k; ++i) {
      a2[i] = i > 0 ? 1.0 / 12.0 : 0.0;
      b2[i] = 10.0 / 12.0;
      c2[i] = i + 1 < k ? 1.0 / 12.0 : 0.0;
    }
    tridiag::solve(a2, b2, c2, y);
    for (int i = 0; i < k; ++i) {
      const double r = grid_.r(i + 1);
      const double g = 1.0 + phi_.v[i + 1] + ell * (ell + 1) / (r * r);
      y[i] += g * x[i];
    }
    if (plus) {
      RadialProfile dens(grid_);
      for (int i = 0; i < k; ++i) dens.v[i + 1] = Q_.v[i + 1] * x[i] / grid_.r(i + 1);
      if (ell == 0) {
        const double r1 = grid_.r(1), r2 = grid_.r(2);
        const double u0 = (x[0] / r1 * r2 * r2 - x[1] / r2 * r1 * r1) / (r2 * r2 - r1 * r1);
        dens.v[0] = Q_.v[0] * u0;
      }
      RadialProfile pot = radial_poisson(dens, ell);
      for (int i = 0; i < k; ++i)
        y[i] += 2.0 * grid_.r(i + 1) * Q_.v[i + 1] * pot.v[i + 1];
    }
    if (has_kernel) {
      const double c = dot_v(x, kern);
      for (int i = 0; i < k; ++i) y[i] += c * kern[i];
    }
  };

  // preconditioner: (T + B diag(g0)) z = B y with g0 = 1 + l(l+1)/r^2
  auto prec = [&](vec& y) {
    vec a2(k), b2(k), c2(k), By(k);
    for (int i = 0; i < k; ++i) {
      const double ym = i > 0 ? y[i - 1] : 0.0;
      const double yp = i + 1 < k ? y[i + 1] : 0.0;
      By[i] = (ym + 10 * y[i] + yp) / 12.0;
    }
    auto g0 = [&](int node) {
      const double r = grid_.r(node);
      return 1.0 + ell * (ell + 1) / (r * r);
    };
    for (int i = 0; i < k; ++i) {
      const int node = i + 1;
      a2[i] = i > 0 ? -1.0 / (h * h) + g0(node - 1) / 12.0 : 0.0;
      b2[i] = 2.0 / (h * h) + 10.0 * g0(node) / 12.0;
      c2[i] = i + 1 < k ? -1.0 / (h * h) + g0(node + 1) / 12.0 : 0.0;
    }
    tridiag::solve(a2, b2, c2, By);
    y = By;
  };

  vec x;
  const int iters = gmres(op, prec, b, x, 1e-13, 100, 4000);
  if (has_kernel) {
    const double c = dot_v(x, kern);
    for (int i = 0; i < k; ++i) x[i] -= c * kern[i];
  }

  RadialProfile u(grid_);
  for (int i = 0; i < k; ++i) u.v[i + 1] = x[i] / grid_.r(i + 1);
  if (ell == 0) {
    const double r1 = grid_.r(1), r2 = grid_.r(2);
    u.v[0] = (u.v[1] * r2 * r2 - u.v[2] * r1 * r1) / (r2 * r2 - r1 * r1);
  }
  u.v[m - 1] = 0.0;

  if (rep) {
    rep->iterations = iters;
    // residual against the right side actually solved (f projected off the
    // kernel in kernel sectors)
    RadialProfile back = apply(u, s, plus);
    double err = 0;
    const double fmax = f.max_abs() + 1e-300;
    for (int i = 0; i < k; ++i) {
      const double fi = b[i] / grid_.r(i + 1);
      err = std::max(err, std::fabs(back.v[i + 1] - fi));
    }
    rep->residual = err / fmax;
  }
  return u;
}

RadialProfile LinearizedOps::solve_Lplus(const RadialProfile& f, Sector s,
                                         SolveReport* rep) const {
  return solve(f, s, true, rep);
}

RadialProfile LinearizedOps::solve_Lminus(const RadialProfile& f, Sector s,
                                          SolveReport* rep) const {
  return solve(f, s, false, rep);
}

CorrectionSet build_corrections(GroundState& gs) {
  LinearizedOps ops(gs);
  CorrectionSet cs;

  cs.S = ops.solve_Lplus(gs.Q, Sector::Radial);
  cs.ip_SQ = ip(cs.S, gs.Q);
  gs.S = cs.S;
  gs.ip_SQ = cs.ip_SQ;

  const RadialProfile LQ = lambda_op(gs.Q);
  RadialProfile rhs_im(gs.Q.grid);
  const double proj = cs.ip_SQ / gs.ip_lambda;
  for (int i = 0; i < gs.Q.grid.m; ++i) rhs_im.v[i] = cs.S.v[i] - proj * LQ.v[i];
  cs.solvability_audit = std::fabs(ip(rhs_im, gs.Q)) /
                         (std::sqrt(ip(rhs_im, rhs_im) * ip(gs.Q, gs.Q)) + 1e-300);
  cs.W_im = ops.solve_Lminus(rhs_im, Sector::Radial);

  RadialProfile dens2QS(gs.Q.grid), densSS(gs.Q.grid);
  for (int i = 0; i < gs.Q.grid.m; ++i) {
    dens2QS.v[i] = 2.0 * gs.Q.v[i] * cs.S.v[i];
    densSS.v[i] = cs.S.v[i] * cs.S.v[i];
  }
  const RadialProfile phi2QS = radial_poisson(dens2QS, 0);
  const RadialProfile phiSS = radial_poisson(densSS, 0);
  RadialProfile rhs_self(gs.Q.grid), rhs_cross(gs.Q.grid);
  for (int i = 0; i < gs.Q.grid.m; ++i) {
    rhs_self.v[i] = phi2QS.v[i] * cs.S.v[i] + phiSS.v[i] * gs.Q.v[i];
    rhs_cross.v[i] = gs.mass * cs.S.v[i] + 2.0 * cs.ip_SQ * gs.Q.v[i];
  }
  cs.W_re_self = ops.solve_Lplus(rhs_self, Sector::Radial);
  cs.W_re_cross = ops.solve_Lplus(rhs_cross, Sector::Radial);

  cs.m2_const = cs.ip_SQ / M_PI;
  cs.b2_const = gs.mass / (4.0 * M_PI);
  return cs;
}

}  // namespace hsl
