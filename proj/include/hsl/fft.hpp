#pragma once

#include "hsl/grid.hpp"

namespace hsl {

struct SpectralField {
  Grid3D grid;
  std::vector<cplx> v;  // mode (mx,my,mz) at idx(mx,my,mz), FFT index order

  SpectralField() = default;
  explicit SpectralField(const Grid3D& g) : grid(g), v(g.size()) {}
};

// Complex transforms on a Grid3D.  Convention (documented once, used
// everywhere): with h = dx and phases referenced to the box corner,
//   forward:  F(k_m) = h^3 sum_j f(x_j) e^{-i k_m . (x_j + L/2)}
//   inverse:  f(x_j) = (1/L^3) sum_m F(k_m) e^{+i k_m . (x_j + L/2)}
// Round trip is the identity and Plancherel reads
//   h^3 sum_x |f|^2 = (1/L^3) sum_k |F|^2,
// i.e. dk = (2pi/L)^3 cell volume divided by (2pi)^3.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid3D& g);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  void forward(const Field3D& f, SpectralField& out) const;
  void inverse(const SpectralField& F, Field3D& out) const;

  // Unnormalized in-place DFTs on a caller buffer of grid.size() entries.
  // forward_raw then inverse_raw multiplies the data by n^3.
  void forward_raw(cplx* data) const;
  void inverse_raw(cplx* data) const;

  const Grid3D& grid() const { return grid_; }

 private:
  Grid3D grid_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

}  // namespace hsl
