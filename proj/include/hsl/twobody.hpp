#pragma once

#include <vector>

#include "hsl/grid.hpp"
#include "hsl/linops.hpp"

namespace hsl {

// The 14 modulation parameters.
struct ModState {
  Vec3 alpha1, alpha2, beta1, beta2;
  double lambda1 = 1, lambda2 = 1;
  double gamma1 = 0, gamma2 = 0;

  Vec3 alpha() const { return alpha2 - alpha1; }
  Vec3 beta() const { return beta2 - beta1; }
};

struct CouplingConstants {
  double g = 1;         // ||Q||^2/(4 pi) physical, or 1 in test mode
  double m2_const = 0;  // from CorrectionSet ((S,Q)/pi)
  double b2_const = 1;  // from CorrectionSet (mass/(4 pi)); equals g

  static CouplingConstants test_mode(double m2 = 0) {
    CouplingConstants c;
    c.g = 1;
    c.b2_const = 1;
    c.m2_const = m2;
    return c;
  }
  static CouplingConstants physical(const GroundState& gs, const CorrectionSet* cs) {
    CouplingConstants c;
    c.g = gs.g;
    c.b2_const = gs.g;
    c.m2_const = cs ? cs->m2_const : 0.0;
    return c;
  }
};

enum class Regime { Hyperbolic, Parabolic, Elliptic };

// Kepler leading system: alpha_j' = 2 beta_j, beta_1' = (g/lambda2) a/|a|^3,
// beta_2' = -(g/lambda1) a/|a|^3, lambda_j' = 0, with the phase law
// gamma_j' = -1/lambda_j^2 + |beta_j|^2 - beta_j' . alpha_j.
ModState rhs_kepler(const ModState& s, const CouplingConstants& c);
// Refined N=2 system: Kepler plus lambda_j' = m_j^(2).
ModState rhs_refined(const ModState& s, const CouplingConstants& c);

double energy_E0(const ModState& s, const CouplingConstants& c);
Regime classify(const ModState& s, const CouplingConstants& c);

// period of the relative Kepler motion (elliptic states only)
double kepler_period(const ModState& s, const CouplingConstants& c);

struct TrajectoryRecord {
  std::vector<double> t;
  std::vector<ModState> s;
  std::vector<double> E0;
  Regime tag = Regime::Hyperbolic;
  bool collision_abort = false;  // stopped early at ||alpha|| < 1e-3
};

enum class RhsKind { Kepler, Refined };

struct IntegrateOptions {
  RhsKind kind = RhsKind::Kepler;
  double max_record_dt = 0;  // 0: record adaptive steps only
};

// Adaptive embedded Dormand-Prince 5(4); tol in [1e-13, 1e-6] controls the
// local error per step.
TrajectoryRecord integrate(const ModState& s0, const CouplingConstants& c,
                           double t0, double t1, double tol,
                           const IntegrateOptions& opt = {});

// Integration from infinity: Picard iteration of the integral maps anchored
// at the asymptotic Kepler solution P_inf (given by its state at T0). Tail
// integrals beyond t_max = t_max_factor*T0 are closed with the fitted
// leading power decay of each integrand.
struct FromInfinityOptions {
  int grid_points = 4000;
  double t_max_factor = 100.0;
  int max_iter = 80;
  double tol = 1e-10;
};

struct FromInfinityResult {
  std::vector<double> t;
  std::vector<ModState> P;      // converged refined solution
  std::vector<ModState> P_inf;  // discrete asymptotic solution on the grid
  std::vector<double> gaps;     // successive iterate sup distances
  bool contracted = true;
  Regime regime = Regime::Hyperbolic;
};

FromInfinityResult integrate_from_infinity(const ModState& p_inf_at_T0,
                                           const CouplingConstants& c, double T0,
                                           Regime regime,
                                           const FromInfinityOptions& opt = {});

// least-squares slope of log(dev) vs log(t) over [t_lo, t_hi]
double fit_decay_exponent(const std::vector<double>& t,
                          const std::vector<double>& dev, double t_lo, double t_hi);

// Planar reduced system of the symmetric parabolic configuration in polar
// variables, Cartesian-integrated so r^2 theta' = a0 is a real check:
//   alpha'' = -c0 a/r^3 + c1 a/r^4 + 2 c2 (lambda - lambda_inf) a/r^3
//   lambda' = c3 (alpha . beta)/r^3,  beta = alpha'/2
struct ReductionConstants {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0;
  double a0 = 0;  // angular momentum r^2 theta'
  double lambda_inf = 1;
  double c4() const { return c1 - 2.0 * c2 * c3; }
};

// leading-order values from the coupling constants: c0 = 2 g (1/l1 + 1/l2),
// c3 = m2_const * lambda_inf^2 (equal masses), c1 = c2 = 0 unless configured
ReductionConstants derive_reduction_constants(const CouplingConstants& c,
                                              double lambda_inf);

struct ReductionResult {
  std::vector<double> t, r, theta, lam;
  double ang_mom_residual = 0;   // max |r^2 theta' - a0|/a0
  double r_t23_limit = 0;        // (9 c0 / 2)^{1/3}
  double r_t23_end = 0;          // measured r/t^{2/3} at t_end
  double theta_dev_coeff = 0;    // (4 a0^3/(3 c0^2))^{1/3}
  double lambda_lock_residual = 0;  // max |(lam - lam_inf) + (c3/2)/r|
};

ReductionResult parabolic_reduction(const ReductionConstants& c, double t_end,
                                    double tol);

}  // namespace hsl
