#include "hsl/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "hsl/runtime.hpp"

namespace hsl {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FreeSpacePoisson::FreeSpacePoisson(const Grid3D& g) : grid_(g), npad_(2 * g.n) {
  const std::size_t real_n = std::size_t(npad_) * npad_ * npad_;
  const std::size_t spec_n = std::size_t(npad_) * npad_ * (npad_ / 2 + 1);
  try {
    pad_.resize(real_n);
    spec_.resize(spec_n);
    mult_.resize(spec_n);
  } catch (const std::bad_alloc&) {
    throw SolverError("FreeSpacePoisson: padding buffer allocation failed (n=" +
                      std::to_string(g.n) + ")");
  }

  const double T = grid_.box;
  const double k0 = 2.0 * M_PI / (2.0 * grid_.box);
  const int np = npad_, nc = npad_ / 2 + 1;
  auto wav = [&](int m) { return k0 * (m <= np / 2 ? m : m - np); };
  for (int iz = 0; iz < np; ++iz) {
    const double kz = wav(iz);
    for (int iy = 0; iy < np; ++iy) {
      const double ky = wav(iy);
      for (int ix = 0; ix < nc; ++ix) {
        const double kx = k0 * ix;
        const double k2 = kx * kx + ky * ky + kz * kz;
        const std::size_t idx =
            std::size_t(ix) + std::size_t(nc) * (std::size_t(iy) + std::size_t(np) * iz);
        if (k2 == 0.0) {
          mult_[idx] = -0.5 * T * T;
        } else {
          const double k = std::sqrt(k2);
          mult_[idx] = -(1.0 - std::cos(T * k)) / k2;
        }
      }
    }
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan_with_nthreads(threads());
  plan_r2c_ = fftw_plan_dft_r2c_3d(np, np, np, pad_.data(),
                                   reinterpret_cast<fftw_complex*>(spec_.data()),
                                   FFTW_ESTIMATE);
  plan_c2r_ = fftw_plan_dft_c2r_3d(np, np, np,
                                   reinterpret_cast<fftw_complex*>(spec_.data()),
                                   pad_.data(), FFTW_ESTIMATE);
  if (!plan_r2c_ || !plan_c2r_) throw std::runtime_error("FFTW r2c planning failed");
}

FreeSpacePoisson::~FreeSpacePoisson() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

void FreeSpacePoisson::run(const RealField3D& rho, Potential3D& out, bool residual_mode) {
  if (!(rho.grid == grid_)) throw std::invalid_argument("poisson: grid mismatch");
  const int n = grid_.n, np = npad_, nc = npad_ / 2 + 1;

  // source compactness report: |rho| mass outside [-L/4, L/4]^3
  {
    double total = 0.0, outside = 0.0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
          const double a = std::fabs(rho.v[grid_.idx(ix, iy, iz)]);
          total += a;
          const bool in = std::fabs(grid_.coord(ix)) <= 0.25 * grid_.box &&
                          std::fabs(grid_.coord(iy)) <= 0.25 * grid_.box &&
                          std::fabs(grid_.coord(iz)) <= 0.25 * grid_.box;
          if (!in) outside += a;
        }
    outside_fraction_ = total > 0 ? outside / total : 0.0;
    if (outside_fraction_ > 1e-10)
      log_info("poisson: source not compact, outside-half-box fraction " +
               std::to_string(outside_fraction_));
  }

  std::fill(pad_.begin(), pad_.end(), 0.0);
  parallel_chunks(std::size_t(n) * n, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const int iz = int(j / n), iy = int(j % n);
      const double* src = rho.v.data() + grid_.idx(0, iy, iz);
      double* dst = pad_.data() + std::size_t(0) +
                    std::size_t(np) * (std::size_t(iy) + std::size_t(np) * iz);
      for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix];
    }
  });

  fftw_execute(static_cast<fftw_plan>(plan_r2c_));

  const double norm = 1.0 / (double(np) * np * np);
  const double k0 = 2.0 * M_PI / (2.0 * grid_.box);
  auto wav = [&](int m) { return k0 * (m <= np / 2 ? m : m - np); };
  parallel_chunks(std::size_t(np) * np, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const int iz = int(j / np), iy = int(j % np);
      const std::size_t base = std::size_t(nc) * j;
      if (!residual_mode) {
        for (int ix = 0; ix < nc; ++ix) spec_[base + ix] *= mult_[base + ix] * norm;
      } else {
        const double kz = wav(iz), ky = wav(iy);
        for (int ix = 0; ix < nc; ++ix) {
          const double kx = k0 * ix;
          const double k2 = kx * kx + ky * ky + kz * kz;
          spec_[base + ix] *= (-k2 * mult_[base + ix] - 1.0) * norm;
        }
      }
    }
  });

  fftw_execute(static_cast<fftw_plan>(plan_c2r_));

  out.grid = grid_;
  out.v.resize(grid_.size());
  parallel_chunks(std::size_t(n) * n, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const int iz = int(j / n), iy = int(j % n);
      const double* src = pad_.data() +
                          std::size_t(np) * (std::size_t(iy) + std::size_t(np) * iz);
      double* dst = out.v.data() + grid_.idx(0, iy, iz);
      for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix];
    }
  });
}

void FreeSpacePoisson::solve(const RealField3D& rho, Potential3D& out) {
  run(rho, out, false);
}

Potential3D FreeSpacePoisson::solve(const RealField3D& rho) {
  Potential3D out;
  run(rho, out, false);
  return out;
}

Potential3D FreeSpacePoisson::laplacian_residual(const RealField3D& rho) {
  Potential3D out;
  run(rho, out, true);
  return out;
}

}  // namespace hsl
