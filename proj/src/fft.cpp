#include "hsl/fft.hpp"

#include <fftw3.h>
#include <omp.h>

#include <mutex>
#include <stdexcept>

#include "hsl/runtime.hpp"

namespace hsl {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    fftw_init_threads();
  });
}

}  // namespace

SpectralTransform::SpectralTransform(const Grid3D& g) : grid_(g) {
  init_fftw_once();
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan_with_nthreads(threads());
  // Plans are created once on a scratch buffer and reused on caller arrays
  // via the new-array interface; FFTW_UNALIGNED removes the alignment
  // requirement for those arrays. FFTW_ESTIMATE keeps planning deterministic.
  std::vector<cplx> scratch(g.size());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const int n = g.n;
  // dims ordered (z, y, x): x is the fastest index
  plan_fwd_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("FFTW planning failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralTransform::forward_raw(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
}

void SpectralTransform::inverse_raw(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
}

void SpectralTransform::forward(const Field3D& f, SpectralField& out) const {
  if (!(f.grid == grid_)) throw std::invalid_argument("forward: grid mismatch");
  out.grid = grid_;
  out.v = f.v;
  forward_raw(out.v.data());
  const double h3 = grid_.dx * grid_.dx * grid_.dx;
  parallel_chunks(out.v.size(), [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) out.v[i] *= h3;
  });
}

void SpectralTransform::inverse(const SpectralField& F, Field3D& out) const {
  if (!(F.grid == grid_)) throw std::invalid_argument("inverse: grid mismatch");
  out.grid = grid_;
  out.v = F.v;
  inverse_raw(out.v.data());
  const double L3 = grid_.box * grid_.box * grid_.box;
  parallel_chunks(out.v.size(), [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) out.v[i] *= 1.0 / L3;
  });
}

}  // namespace hsl
