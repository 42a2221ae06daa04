#pragma once

#include "hsl/groundstate.hpp"
#include "hsl/radial.hpp"

namespace hsl {

// angular sector of a radial representative: l = 0 or the l = 1 component
// along a fixed direction
enum class Sector { Radial = 0, Dipole = 1 };

struct SolveReport {
  int iterations = 0;
  double residual = 0;     // ||apply(u) - f||_inf relative to ||f||_inf
  double solvability = 0;  // |(f, kernel)|/(||f|| ||kernel||) for kernel sectors
};

// Linearized operators around Q,
//   L+ f = -Delta f + f + phi_{Q^2} f + 2 phi_{(Qf)} Q
//   L- f = -Delta f + f + phi_{Q^2} f,
// discretized on the ground-state grid in w = r u variables with the same
// Numerov stencil the ground-state solve satisfies, so the kernel identities
// L- Q = 0 and L+ (dQ/dr) = 0 (l=1) hold at solver accuracy. The nonlocal
// term goes through the exact sector Green's function of the Laplacian
// (monopole weight for l=0, dipole weight for l=1).
class LinearizedOps {
 public:
  explicit LinearizedOps(const GroundState& gs);

  RadialProfile apply_Lplus(const RadialProfile& u, Sector s) const;
  RadialProfile apply_Lminus(const RadialProfile& u, Sector s) const;

  // Projected inversion. Solvability (f ⟂ kernel) is checked in the sectors
  // with kernel: L- on l=0 (kernel Q), L+ on l=1 (kernel dQ/dr); violations
  // beyond 1e-6 relative are rejected. Solutions in kernel sectors are made
  // unique by (u, kernel) = 0.
  RadialProfile solve_Lplus(const RadialProfile& f, Sector s,
                            SolveReport* rep = nullptr) const;
  RadialProfile solve_Lminus(const RadialProfile& f, Sector s,
                             SolveReport* rep = nullptr) const;

  const RadialGrid& grid() const { return grid_; }

 private:
  RadialProfile apply(const RadialProfile& u, Sector s, bool plus) const;
  RadialProfile solve(const RadialProfile& f, Sector s, bool plus,
                      SolveReport* rep) const;

  RadialGrid grid_;
  RadialProfile Q_, phi_, dQ_;
};

// Unit shapes of the order-1/order-2 corrections. Prefactor conventions
// (j = 1,2, j+1 mod 2, a_j = lambda_j^2 mass / (4 pi lambda_{j+1})):
//   T^(1)_j      = (a_j/||alpha||) S
//   Im T^(2)_j   = -2 lambda_j^2 a_j (alpha.beta)/||alpha||^3 * W_im
//   Re T^(2)_j   = -(1/||alpha||^2) [a_j^2 W_re_self
//                    + (lambda_j^2 a_{j+1}/(4 pi lambda_{j+1})) W_re_cross]
//   m_j^(2)      = m2_const (lambda_j^3/lambda_{j+1}) (alpha.beta)/||alpha||^3
//   b_j^(2)      = (-1)^{j+1} (b2_const/lambda_{j+1}) alpha/||alpha||^3
struct CorrectionSet {
  RadialProfile S;           // L+ S = Q
  RadialProfile W_im;        // L- W_im = S - ((S,Q)/(LambdaQ,Q)) LambdaQ
  RadialProfile W_re_self;   // L+ W = phi_{2QS} S + phi_{S^2} Q
  RadialProfile W_re_cross;  // L+ W = mass S + 2 (Q,S) Q
  double m2_const = 0;       // (S,Q)/pi
  double b2_const = 0;       // mass/(4 pi)
  double ip_SQ = 0;
  double solvability_audit = 0;  // |(rhs_im, Q)| normalized, after m2 adjustment
};

// Builds the correction set and fills gs.S, gs.ip_SQ.
CorrectionSet build_corrections(GroundState& gs);

}  // namespace hsl
