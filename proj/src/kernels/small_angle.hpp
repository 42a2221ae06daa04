#pragma once

// Shared small-angle sin/cos polynomials so scalar and SIMD backends agree
// to the last few ulps.  Valid for |t| <= 0.5: truncation error ~2e-14,
// and ~1e-17 for |t| <= 0.25 (the stepper operates well below that).

namespace hsl::kernels::detail {

// sin(t)/t, t2 = t*t
inline double sinc_poly(double t2) {
  return 1.0 + t2 * (-1.0 / 6.0 + t2 * (1.0 / 120.0 + t2 * (-1.0 / 5040.0 +
             t2 * (1.0 / 362880.0 + t2 * (-1.0 / 39916800.0)))));
}

inline double cos_poly(double t2) {
  return 1.0 + t2 * (-1.0 / 2.0 + t2 * (1.0 / 24.0 + t2 * (-1.0 / 720.0 +
             t2 * (1.0 / 40320.0 + t2 * (-1.0 / 3628800.0)))));
}

}  // namespace hsl::kernels::detail
