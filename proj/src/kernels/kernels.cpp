#include "hsl/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace hsl::kernels {

namespace {

Backend detect() {
#if defined(__x86_64__) || defined(__i386__)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<Backend> g_backend{detect()};

}  // namespace

bool avx2_available() { return detect() == Backend::Avx2; }

Backend active() { return g_backend.load(std::memory_order_relaxed); }

void force(Backend b) {
  if (b == Backend::Avx2 && !avx2_available())
    throw std::runtime_error("kernels: AVX2 not supported on this CPU");
  g_backend.store(b, std::memory_order_relaxed);
}

#define HSL_DISPATCH(call) \
  (active() == Backend::Avx2 ? avx2::call : scalar::call)

void cmul(cplx* u, const cplx* v, std::size_t n) { HSL_DISPATCH(cmul(u, v, n)); }

void phase_kick(cplx* u, const double* phi, double s, std::size_t n) {
  HSL_DISPATCH(phase_kick(u, phi, s, n));
}

void abs2(const cplx* u, double* out, std::size_t n) {
  HSL_DISPATCH(abs2(u, out, n));
}

double sum_abs2(const cplx* u, std::size_t n) {
  return HSL_DISPATCH(sum_abs2(u, n));
}

double weighted_sum_abs2(const cplx* u, const double* w, std::size_t n) {
  return HSL_DISPATCH(weighted_sum_abs2(u, w, n));
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  return HSL_DISPATCH(dot(a, b, n));
}

void axpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
  HSL_DISPATCH(axpy(y, a, x, n));
}

#undef HSL_DISPATCH

}  // namespace hsl::kernels
