#pragma once

// Data-parallel inner loops of the spectral evolver: pointwise complex
// arithmetic and reductions over n^3 grids. Scalar reference kernels plus
// AVX2 variants selected at runtime; both backends are exposed so tests can
// check them against each other.

#include <complex>
#include <cstddef>

namespace hsl::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

bool avx2_available();
Backend active();
// Test hook. Throws std::runtime_error when the backend is not supported
// on this machine.
void force(Backend b);

// u[i] *= v[i]
void cmul(cplx* u, const cplx* v, std::size_t n);
// u[i] *= exp(i * s * phi[i]).  Contract: |s * phi[i]| <= 0.5 (small-angle
// polynomial phasor; callers split larger rotations).
void phase_kick(cplx* u, const double* phi, double s, std::size_t n);
// out[i] = |u[i]|^2
void abs2(const cplx* u, double* out, std::size_t n);
double sum_abs2(const cplx* u, std::size_t n);
// sum w[i] |u[i]|^2
double weighted_sum_abs2(const cplx* u, const double* w, std::size_t n);
// sum conj(a[i]) b[i]
cplx dot(const cplx* a, const cplx* b, std::size_t n);
// y[i] += a * x[i]
void axpy(cplx* y, cplx a, const cplx* x, std::size_t n);

namespace scalar {
void cmul(cplx* u, const cplx* v, std::size_t n);
void phase_kick(cplx* u, const double* phi, double s, std::size_t n);
void abs2(const cplx* u, double* out, std::size_t n);
double sum_abs2(const cplx* u, std::size_t n);
double weighted_sum_abs2(const cplx* u, const double* w, std::size_t n);
cplx dot(const cplx* a, const cplx* b, std::size_t n);
void axpy(cplx* y, cplx a, const cplx* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
void cmul(cplx* u, const cplx* v, std::size_t n);
void phase_kick(cplx* u, const double* phi, double s, std::size_t n);
void abs2(const cplx* u, double* out, std::size_t n);
double sum_abs2(const cplx* u, std::size_t n);
double weighted_sum_abs2(const cplx* u, const double* w, std::size_t n);
cplx dot(const cplx* a, const cplx* b, std::size_t n);
void axpy(cplx* y, cplx a, const cplx* x, std::size_t n);
}  // namespace avx2

}  // namespace hsl::kernels
