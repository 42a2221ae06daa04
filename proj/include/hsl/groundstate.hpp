#pragma once

#include <array>

#include "hsl/grid.hpp"
#include "hsl/radial.hpp"

namespace hsl {

// Solved ground state of  Delta W - phi_{|W|^2} W = W  together with the
// constants the modulation machinery consumes. Frequency is pinned to 1;
// the mass is an output.
struct GroundState {
  RadialProfile Q;
  RadialProfile phi;  // phi_{Q^2}
  double mass = 0;    // ||Q||_{L^2}^2 = 4pi int Q^2 r^2 dr
  double g = 0;       // mass / (4 pi)
  double ip_lambda = 0;            // (Lambda Q, Q)
  std::array<double, 3> ip_grad{};  // (x_i Q, d_i Q), equal components
  RadialProfile S;    // L_+ S = Q; filled by linops::build_corrections
  double ip_SQ = 0;   // (S, Q)
  double residual = 0;  // discrete PDE residual at exit, relative to ||Q||_inf
  int iterations = 0;

  double q0() const { return Q.v[0]; }
};

// Normalized fixed-point iteration with frequency renormalization.
// tol in [1e-12, 1e-6] bounds the discrete radial-system residual relative
// to ||Q||_inf. Throws SolverError on non-convergence (message carries the
// final residual) and when a negative lobe appears (wrong branch).
GroundState solve_ground_state(const RadialGrid& grid, double tol);

// Independent oracle: shooting on the coupled radial ODEs
//   Q'' + (2/r) Q' = psi Q,  psi'' + (2/r) psi' = Q^2
// with bisection on psi(0); scaled back to frequency 1.
struct ShootingResult {
  double q0 = 0;    // Q(0) of the frequency-1 ground state
  double mass = 0;  // ||Q||^2 of the frequency-1 ground state
  double psi0 = 0;  // converged shooting parameter
};
ShootingResult shoot_ground_state(double r_end = 40.0, double step = 1e-3);

struct PohozaevReport {
  double lambda_dev = 0;               // |(LambdaQ,Q)/mass - 1/2|
  std::array<double, 3> grad_dev{};    // |(x_iQ,d_iQ)/mass + 1/2|
};
PohozaevReport pohozaev_report(const GroundState& gs);

// lambda^{-2} Q((x-center)/lambda) e^{-i gamma + i beta.x} by cubic
// interpolation of the radial profile.
Field3D lift_to_box(const GroundState& gs, const Grid3D& grid, Vec3 center,
                    double lambda, Vec3 beta, double gamma);

// Lowest eigenpair of (-Delta + phi) on radial functions, Numerov-discretized;
// u is normalized to unit 3D L^2 norm with u(0) > 0.
struct RadialEigenpair {
  double eps = 0;
  RadialProfile u;
};
RadialEigenpair lowest_radial_eigenpair(const RadialProfile& phi);

}  // namespace hsl
