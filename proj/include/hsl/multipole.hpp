#pragma once

#include "hsl/grid.hpp"
#include "hsl/radial.hpp"

namespace hsl {

// Terms of the expansion 1/||alpha - zeta|| = sum_k F_k(alpha, zeta) + error.
// F_k is homogeneous of degree -k in alpha and a homogeneous polynomial of
// degree k-1 in zeta; general k goes through the Legendre generating
// function F_k = ||zeta||^{k-1} P_{k-1}(cos theta) / ||alpha||^k.
double eval_F(int k, Vec3 alpha, Vec3 zeta);

// sum_{k<=N} F_k; requires ||zeta|| <= ||alpha||/2
double truncated_kernel(int N, Vec3 alpha, Vec3 zeta);

// Empirical remainder law |1/||a-z|| - sum| <= C_N (1+||z||)^{N+1}/||a||^{N+1}:
// scans zeta over a ball and alpha over a log-spaced ray, reports the fitted
// constant and the log-log slope of the remainder in ||alpha||.
struct RemainderFit {
  double c_fit = 0;
  double slope = 0;
};
RemainderFit remainder_scan(int N, double zeta_radius, double alpha_min,
                            double alpha_max, int n_alpha, unsigned seed = 7);

// Approximate correction field of order k sourced by a radial density:
//   -(lambda_j^2 / (4 pi lambda_{j+1})) *
//       int |v(xi)|^2 F_k((-1)^j alpha, lambda_{j+1} xi - lambda_j y) dxi
// src is |v|^2 sampled radially; j in {1,2} supplies the parity sign.
double approx_field(int k, const RadialProfile& src_abs2, double lambda_j,
                    double lambda_j1, Vec3 alpha, int j, Vec3 y);

// Brute-force oracle for tests: the exact convolution
//   -(lambda_j^2/(4 pi lambda_{j+1})) int |v|^2 / ||alpha - (-1)^j(lambda_{j+1} xi - lambda_j y)|| dxi
double exact_field(const RadialProfile& src_abs2, double lambda_j,
                   double lambda_j1, Vec3 alpha, int j, Vec3 y);

}  // namespace hsl
