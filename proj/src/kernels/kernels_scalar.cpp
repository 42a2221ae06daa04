#include "hsl/kernels.hpp"

#include "small_angle.hpp"

namespace hsl::kernels::scalar {

void cmul(cplx* u, const cplx* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) u[i] *= v[i];
}

void phase_kick(cplx* u, const double* phi, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s * phi[i];
    const double t2 = t * t;
    const double c = detail::cos_poly(t2);
    const double sn = t * detail::sinc_poly(t2);
    const double re = u[i].real(), im = u[i].imag();
    u[i] = {re * c - im * sn, re * sn + im * c};
  }
}

void abs2(const cplx* u, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = u[i].real() * u[i].real() + u[i].imag() * u[i].imag();
}

double sum_abs2(const cplx* u, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += u[i].real() * u[i].real() + u[i].imag() * u[i].imag();
  return acc;
}

double weighted_sum_abs2(const cplx* u, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += w[i] * (u[i].real() * u[i].real() + u[i].imag() * u[i].imag());
  return acc;
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace hsl::kernels::scalar
