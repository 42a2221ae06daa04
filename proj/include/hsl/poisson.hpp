#pragma once

#include "hsl/grid.hpp"

namespace hsl {

// Free-space Newtonian potential, Delta phi = rho with
// phi = -(1/(4pi|x|)) * rho, by zero-padded (doubled-domain) convolution.
// The Green's kernel enters through its exact truncated-kernel transform
//   ghat(k) = -(1 - cos(T k))/k^2,   ghat(0) = -T^2/2,   T = L,
// so the convolution reproduces the untruncated free-space field for every
// source/target pair closer than L while periodic images (all farther than
// T on the doubled domain) contribute nothing.  Compact sources are assumed;
// mass outside the central half-box is reported as a warning.
class FreeSpacePoisson {
 public:
  explicit FreeSpacePoisson(const Grid3D& g);
  ~FreeSpacePoisson();
  FreeSpacePoisson(const FreeSpacePoisson&) = delete;
  FreeSpacePoisson& operator=(const FreeSpacePoisson&) = delete;

  void solve(const RealField3D& rho, Potential3D& out);
  Potential3D solve(const RealField3D& rho);

  // Delta phi - rho evaluated spectrally on the padded domain and restricted
  // to the box; meaningful in the central region for compact sources.
  Potential3D laplacian_residual(const RealField3D& rho);

  // fraction of |rho| mass outside the central half-box in the last solve
  double last_outside_fraction() const { return outside_fraction_; }

  const Grid3D& grid() const { return grid_; }

 private:
  void run(const RealField3D& rho, Potential3D& out, bool residual_mode);

  Grid3D grid_;
  int npad_ = 0;
  std::vector<double> pad_;        // npad^3 real workspace
  std::vector<cplx> spec_;         // npad^2 * (npad/2+1) spectrum
  std::vector<double> mult_;       // ghat(k) on the r2c spectrum layout
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
  double outside_fraction_ = 0.0;
};

}  // namespace hsl
