#include "hsl/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "hsl/runtime.hpp"

namespace hsl {

namespace {

constexpr int kDim = 16;
using Y = std::array<double, kDim>;

Y pack(const ModState& s) {
  return {s.alpha1.x, s.alpha1.y, s.alpha1.z, s.alpha2.x, s.alpha2.y, s.alpha2.z,
          s.beta1.x,  s.beta1.y,  s.beta1.z,  s.beta2.x,  s.beta2.y,  s.beta2.z,
          s.lambda1,  s.lambda2,  s.gamma1,   s.gamma2};
}

ModState unpack(const Y& y) {
  ModState s;
  s.alpha1 = {y[0], y[1], y[2]};
  s.alpha2 = {y[3], y[4], y[5]};
  s.beta1 = {y[6], y[7], y[8]};
  s.beta2 = {y[9], y[10], y[11]};
  s.lambda1 = y[12];
  s.lambda2 = y[13];
  s.gamma1 = y[14];
  s.gamma2 = y[15];
  return s;
}

ModState rhs_impl(const ModState& s, const CouplingConstants& c, bool refined) {
  const Vec3 a = s.alpha();
  const double r = norm(a);
  if (!(r > 0)) throw SolverError("twobody rhs: singular configuration alpha = 0");
  const double inv_r3 = 1.0 / (r * r * r);
  ModState d;
  d.alpha1 = 2.0 * s.beta1;
  d.alpha2 = 2.0 * s.beta2;
  d.beta1 = (c.b2_const / s.lambda2) * inv_r3 * a;
  d.beta2 = -(c.b2_const / s.lambda1) * inv_r3 * a;
  if (refined) {
    const double ab = dot(a, s.beta());
    d.lambda1 = c.m2_const * (s.lambda1 * s.lambda1 * s.lambda1 / s.lambda2) * ab * inv_r3;
    d.lambda2 = c.m2_const * (s.lambda2 * s.lambda2 * s.lambda2 / s.lambda1) * ab * inv_r3;
  } else {
    d.lambda1 = d.lambda2 = 0.0;
  }
  d.gamma1 = -1.0 / (s.lambda1 * s.lambda1) + dot(s.beta1, s.beta1) - dot(d.beta1, s.alpha1);
  d.gamma2 = -1.0 / (s.lambda2 * s.lambda2) + dot(s.beta2, s.beta2) - dot(d.beta2, s.alpha2);
  return d;
}

}  // namespace

ModState rhs_kepler(const ModState& s, const CouplingConstants& c) {
  return rhs_impl(s, c, false);
}

ModState rhs_refined(const ModState& s, const CouplingConstants& c) {
  return rhs_impl(s, c, true);
}

double energy_E0(const ModState& s, const CouplingConstants& c) {
  const Vec3 b = s.beta();
  const double r = norm(s.alpha());
  if (!(r > 0)) throw SolverError("energy_E0: alpha = 0");
  return dot(b, b) - c.g * (1.0 / s.lambda1 + 1.0 / s.lambda2) / r;
}

Regime classify(const ModState& s, const CouplingConstants& c) {
  const double e = energy_E0(s, c);
  if (std::fabs(e) <= 1e-12) return Regime::Parabolic;
  return e > 0 ? Regime::Hyperbolic : Regime::Elliptic;
}

double kepler_period(const ModState& s, const CouplingConstants& c) {
  const double e0 = energy_E0(s, c);
  if (!(e0 < 0)) throw std::invalid_argument("kepler_period: state is not elliptic");
  const double mu_eff = 2.0 * c.g * (1.0 / s.lambda1 + 1.0 / s.lambda2);
  const double a_semi = -mu_eff / (4.0 * e0);
  return 2.0 * M_PI * std::sqrt(a_semi * a_semi * a_semi / mu_eff);
}

namespace {

// Dormand-Prince 5(4) tableau
const double A21 = 1.0 / 5;
const double A31 = 3.0 / 40, A32 = 9.0 / 40;
const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
             A54 = -212.0 / 729;
const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
             A64 = 49.0 / 176, A65 = -5103.0 / 18656;
const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
             B5 = -2187.0 / 6784, B6 = 11.0 / 84;
const double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
             E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
             E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

template <int N>
using Arr = std::array<double, N>;

// generic adaptive DP45 on a fixed-size array state; f(t, y) -> dy
template <int N>
void dp45(const std::function<Arr<N>(double, const Arr<N>&)>& f, double t0, double t1,
          Arr<N>& y, double tol,
          const std::function<bool(double, const Arr<N>&)>& on_step) {
  double t = t0;
  double dt = (t1 - t0) * 1e-3;
  const double dt_min = (t1 - t0) * 1e-14;
  Arr<N> k1 = f(t, y);
  while (t < t1) {
    if (t + dt > t1) dt = t1 - t;
    Arr<N> y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < N; ++i) y2[i] = y[i] + dt * A21 * k1[i];
    Arr<N> k2 = f(t + dt / 5, y2);
    for (int i = 0; i < N; ++i) y3[i] = y[i] + dt * (A31 * k1[i] + A32 * k2[i]);
    Arr<N> k3 = f(t + 3 * dt / 10, y3);
    for (int i = 0; i < N; ++i)
      y4[i] = y[i] + dt * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    Arr<N> k4 = f(t + 4 * dt / 5, y4);
    for (int i = 0; i < N; ++i)
      y5[i] = y[i] + dt * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    Arr<N> k5 = f(t + 8 * dt / 9, y5);
    for (int i = 0; i < N; ++i)
      y6[i] = y[i] + dt * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                           A65 * k5[i]);
    Arr<N> k6 = f(t + dt, y6);
    for (int i = 0; i < N; ++i)
      y7[i] = y[i] + dt * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] +
                           B6 * k6[i]);
    Arr<N> k7 = f(t + dt, y7);

    double err = 0;
    for (int i = 0; i < N; ++i) {
      const double e = dt * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                             E6 * k6[i] + E7 * k7[i]);
      const double sc = tol * (1.0 + std::max(std::fabs(y[i]), std::fabs(y7[i])));
      err = std::max(err, std::fabs(e) / sc);
    }
    if (err <= 1.0) {
      t += dt;
      y = y7;
      k1 = k7;  // FSAL
      if (!on_step(t, y)) return;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    dt *= fac;
    if (dt < dt_min) throw SolverError("dp45: step size underflow");
  }
}

}  // namespace

TrajectoryRecord integrate(const ModState& s0, const CouplingConstants& c, double t0,
                           double t1, double tol, const IntegrateOptions& opt) {
  if (!(tol >= 1e-13 && tol <= 1e-6))
    throw std::invalid_argument("integrate: tol must lie in [1e-13, 1e-6]");
  TrajectoryRecord rec;
  rec.tag = classify(s0, c);

  const bool refined = opt.kind == RhsKind::Refined;
  auto f = [&](double, const Y& y) {
    return pack(rhs_impl(unpack(y), c, refined));
  };

  Y y = pack(s0);
  rec.t.push_back(t0);
  rec.s.push_back(s0);
  rec.E0.push_back(energy_E0(s0, c));
  double last_rec = t0;

  try {
    dp45<kDim>(f, t0, t1, y, tol, [&](double t, const Y& yy) {
      const ModState s = unpack(yy);
      if (norm(s.alpha()) < 1e-3) {
        rec.collision_abort = true;
        return false;
      }
      if (opt.max_record_dt <= 0 || t - last_rec >= opt.max_record_dt || t >= t1) {
        rec.t.push_back(t);
        rec.s.push_back(s);
        rec.E0.push_back(energy_E0(s, c));
        last_rec = t;
      }
      return true;
    });
  } catch (const SolverError&) {
    if (!rec.collision_abort) throw;
  }
  return rec;
}

double fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& dev,
                          double t_lo, double t_hi) {
  double mx = 0, my = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi || dev[i] <= 0) continue;
    mx += std::log(t[i]);
    my += std::log(dev[i]);
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_decay_exponent: not enough samples");
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi || dev[i] <= 0) continue;
    const double dx = std::log(t[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(dev[i]) - my);
  }
  return sxy / sxx;
}

namespace {

// tail of int_{tmax}^inf f dt for power-law decaying f, estimated from the
// last samples: f ~ f(tmax) (tmax/t)^p
double power_tail(double f_mid, double f_end, double t_mid, double t_end) {
  if (f_end == 0.0 || f_mid == 0.0) return 0.0;
  const double ratio = std::fabs(f_mid / f_end);
  if (ratio <= 1.0) return 0.0;  // not decaying; no closure
  const double p = std::log(ratio) / std::log(t_end / t_mid);
  if (p <= 1.05) return 0.0;
  return f_end * t_end / (p - 1.0);
}

}  // namespace

FromInfinityResult integrate_from_infinity(const ModState& p_inf_at_T0,
                                           const CouplingConstants& c, double T0,
                                           Regime regime,
                                           const FromInfinityOptions& opt) {
  if (regime == Regime::Elliptic)
    throw std::invalid_argument("integrate_from_infinity: elliptic regime not admissible");
  if (regime == Regime::Parabolic) {
    const ModState& s = p_inf_at_T0;
    if (std::fabs(s.lambda1 - s.lambda2) > 1e-12)
      throw std::invalid_argument("integrate_from_infinity: parabolic regime requires equal masses");
    const Vec3 com = s.lambda2 * s.alpha1 + s.lambda1 * s.alpha2;
    if (norm(com) > 1e-8 * (norm(s.alpha()) + 1) ||
        std::fabs(s.alpha1.z) + std::fabs(s.alpha2.z) + std::fabs(s.beta1.z) +
                std::fabs(s.beta2.z) > 1e-12)
      throw std::invalid_argument(
          "integrate_from_infinity: parabolic regime requires the symmetric planar normalization");
  }

  const int K = opt.grid_points;
  const double Tmax = opt.t_max_factor * T0;
  FromInfinityResult res;
  res.regime = regime;
  res.t.resize(K + 1);
  for (int i = 0; i <= K; ++i)
    res.t[i] = T0 * std::pow(Tmax / T0, double(i) / K);

  // sample the asymptotic Kepler solution on the grid
  res.P_inf.resize(K + 1);
  {
    Y y = pack(p_inf_at_T0);
    res.P_inf[0] = p_inf_at_T0;
    auto f = [&](double, const Y& yy) { return pack(rhs_impl(unpack(yy), c, false)); };
    for (int i = 1; i <= K; ++i) {
      dp45<kDim>(f, res.t[i - 1], res.t[i], y, 1e-12,
                 [](double, const Y&) { return true; });
      res.P_inf[i] = unpack(y);
    }
  }

  // reverse-cumulative trapezoid of per-component samples
  auto cum_from_top = [&](const std::vector<double>& f) {
    std::vector<double> I(K + 1, 0.0);
    for (int i = K - 1; i >= 0; --i)
      I[i] = I[i + 1] + 0.5 * (f[i] + f[i + 1]) * (res.t[i + 1] - res.t[i]);
    return I;
  };
  auto tail_of = [&](const std::vector<double>& f) {
    return power_tail(f[K - K / 10], f[K], res.t[K - K / 10], res.t[K]);
  };

  // Discrete-consistent asymptotic betas: beta_inf(t) = beta_limit - int_t^inf b^(2)(P_inf)
  std::array<std::vector<double>, 6> binf;  // components of (b_1, b_2)
  for (auto& v : binf) v.resize(K + 1);
  for (int i = 0; i <= K; ++i) {
    const ModState d = rhs_impl(res.P_inf[i], c, false);
    for (int k = 0; k < 3; ++k) {
      binf[k][i] = d.beta1[k];
      binf[3 + k][i] = d.beta2[k];
    }
  }
  std::array<double, 6> beta_limit{};
  std::array<std::vector<double>, 6> Ibinf;
  for (int k = 0; k < 6; ++k) {
    Ibinf[k] = cum_from_top(binf[k]);
    const double tail = tail_of(binf[k]);
    const double beta_end =
        k < 3 ? res.P_inf[K].beta1[k] : res.P_inf[K].beta2[k - 3];
    beta_limit[k] = beta_end + tail;
    // overwrite P_inf betas with the discrete-consistent values
    for (int i = 0; i <= K; ++i) {
      const double b = beta_limit[k] - (Ibinf[k][i] + tail);
      if (k < 3)
        res.P_inf[i].beta1[k] = b;
      else
        res.P_inf[i].beta2[k - 3] = b;
    }
  }

  // Picard iteration of the Gamma maps
  res.P = res.P_inf;
  std::vector<ModState> next(K + 1);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    // integrands of the current iterate
    std::array<std::vector<double>, 6> bcur, dbeta;
    std::array<std::vector<double>, 2> mcur;
    for (auto& v : bcur) v.resize(K + 1);
    for (auto& v : dbeta) v.resize(K + 1);
    for (auto& v : mcur) v.resize(K + 1);
    for (int i = 0; i <= K; ++i) {
      const ModState d = rhs_impl(res.P[i], c, true);
      for (int k = 0; k < 3; ++k) {
        bcur[k][i] = d.beta1[k];
        bcur[3 + k][i] = d.beta2[k];
        dbeta[k][i] = 2.0 * (res.P_inf[i].beta1[k] - res.P[i].beta1[k]);
        dbeta[3 + k][i] = 2.0 * (res.P_inf[i].beta2[k] - res.P[i].beta2[k]);
      }
      mcur[0][i] = d.lambda1;
      mcur[1][i] = d.lambda2;
    }

    double gap = 0;
    for (int k = 0; k < 6; ++k) {
      const auto Ib = cum_from_top(bcur[k]);
      const double tb = tail_of(bcur[k]);
      const auto Id = cum_from_top(dbeta[k]);
      const double td = tail_of(dbeta[k]);
      for (int i = 0; i <= K; ++i) {
        const double beta_new = beta_limit[k] - (Ib[i] + tb);
        const double alpha_inf =
            k < 3 ? res.P_inf[i].alpha1[k] : res.P_inf[i].alpha2[k - 3];
        const double alpha_new = alpha_inf + (Id[i] + td);
        ModState& n = next[i];
        const ModState& p = res.P[i];
        if (k < 3) {
          n.beta1[k] = beta_new;
          n.alpha1[k] = alpha_new;
          gap = std::max(gap, std::fabs(beta_new - p.beta1[k]));
          gap = std::max(gap, std::fabs(alpha_new - p.alpha1[k]) /
                                  (1.0 + std::fabs(alpha_inf)));
        } else {
          n.beta2[k - 3] = beta_new;
          n.alpha2[k - 3] = alpha_new;
          gap = std::max(gap, std::fabs(beta_new - p.beta2[k - 3]));
          gap = std::max(gap, std::fabs(alpha_new - p.alpha2[k - 3]) /
                                  (1.0 + std::fabs(alpha_inf)));
        }
      }
    }
    for (int j = 0; j < 2; ++j) {
      const auto Im = cum_from_top(mcur[j]);
      const double tm = tail_of(mcur[j]);
      const double lam_inf = j == 0 ? p_inf_at_T0.lambda1 : p_inf_at_T0.lambda2;
      for (int i = 0; i <= K; ++i) {
        const double lam_new = lam_inf - (Im[i] + tm);
        ModState& n = next[i];
        if (j == 0) {
          gap = std::max(gap, std::fabs(lam_new - res.P[i].lambda1));
          n.lambda1 = lam_new;
        } else {
          gap = std::max(gap, std::fabs(lam_new - res.P[i].lambda2));
          n.lambda2 = lam_new;
        }
      }
    }
    for (int i = 0; i <= K; ++i) {
      next[i].gamma1 = res.P[i].gamma1;
      next[i].gamma2 = res.P[i].gamma2;
    }
    res.P.swap(next);
    res.gaps.push_back(gap);
    if (gap < opt.tol) break;
    const std::size_t ng = res.gaps.size();
    if (ng >= 2 && res.gaps[ng - 1] > 0.9 * res.gaps[ng - 2] &&
        res.gaps[ng - 1] > opt.tol) {
      res.contracted = false;
      throw SolverError(
          "integrate_from_infinity: iterates stopped contracting (ratio > 0.9); "
          "T0 too small");
    }
  }
  if (!res.gaps.empty() && res.gaps.back() >= opt.tol)
    throw SolverError("integrate_from_infinity: no convergence within max_iter");
  return res;
}

ReductionConstants derive_reduction_constants(const CouplingConstants& c,
                                              double lambda_inf) {
  ReductionConstants rc;
  rc.c0 = 2.0 * c.g * (2.0 / lambda_inf);
  rc.c3 = c.m2_const * lambda_inf * lambda_inf;
  rc.lambda_inf = lambda_inf;
  return rc;
}

ReductionResult parabolic_reduction(const ReductionConstants& c, double t_end,
                                    double tol) {
  if (!(c.a0 > 0))
    throw std::invalid_argument("parabolic_reduction: a0 = 0 is a degenerate radial orbit");
  if (!(c.c0 > 0)) throw std::invalid_argument("parabolic_reduction: c0 must be positive");

  // perihelion of the leading parabola
  const double r_p = c.a0 * c.a0 / (2.0 * c.c0);
  using S5 = std::array<double, 5>;  // (ax, ay, vx, vy, lambda), v = alpha'
  S5 y{r_p, 0.0, 0.0, c.a0 / r_p, c.lambda_inf - 0.5 * c.c3 / r_p};

  auto f = [&](double, const S5& s) {
    const double r2 = s[0] * s[0] + s[1] * s[1];
    const double r = std::sqrt(r2), r3 = r2 * r, r4 = r2 * r2;
    const double coef = -c.c0 / r3 + c.c1 / r4 + 2.0 * c.c2 * (s[4] - c.lambda_inf) / r3;
    S5 d;
    d[0] = s[2];
    d[1] = s[3];
    d[2] = coef * s[0];
    d[3] = coef * s[1];
    d[4] = c.c3 * (s[0] * s[2] + s[1] * s[3]) / (2.0 * r3);
    return d;
  };

  ReductionResult out;
  out.r_t23_limit = std::cbrt(4.5 * c.c0);
  out.theta_dev_coeff = std::cbrt(4.0 * c.a0 * c.a0 * c.a0 / (3.0 * c.c0 * c.c0));

  // record on a log grid from t=1 up
  const int K = 600;
  std::vector<double> rec_t(K + 1);
  for (int i = 0; i <= K; ++i)
    rec_t[i] = std::pow(t_end, double(i) / K);

  double amr = 0, lock = 0;
  double theta_prev = 0.0;
  int wind = 0;
  auto record = [&](double t, const S5& s) {
    const double r = std::hypot(s[0], s[1]);
    double th = std::atan2(s[1], s[0]);
    // unwrap
    while (th - theta_prev > M_PI) {
      th -= 2 * M_PI;
      --wind;
    }
    while (th - theta_prev < -M_PI) {
      th += 2 * M_PI;
      ++wind;
    }
    theta_prev = th;
    out.t.push_back(t);
    out.r.push_back(r);
    out.theta.push_back(th);
    out.lam.push_back(s[4]);
    amr = std::max(amr, std::fabs((s[0] * s[3] - s[1] * s[2]) - c.a0) / c.a0);
    lock = std::max(lock, std::fabs((s[4] - c.lambda_inf) + 0.5 * c.c3 / r));
    (void)t;
  };

  record(0.0, y);
  double t_cur = 0.0;
  auto noop = [](double, const S5&) { return true; };
  for (int i = 0; i <= K; ++i) {
    if (rec_t[i] <= t_cur) continue;
    dp45<5>(f, t_cur, rec_t[i], y, tol, noop);
    t_cur = rec_t[i];
    record(t_cur, y);
  }
  out.ang_mom_residual = amr;
  out.lambda_lock_residual = lock;
  out.r_t23_end = out.r.back() / std::pow(out.t.back(), 2.0 / 3.0);
  return out;
}

}  // namespace hsl
