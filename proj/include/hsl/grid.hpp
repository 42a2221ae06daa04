#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hsl/kernels.hpp"

namespace hsl {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Uniform periodic cube, axis origin at the box center.
// Point i maps to coordinate -L/2 + i*dx; index layout is x-fastest.
struct Grid3D {
  int n = 0;
  double box = 0;  // side length L
  double dx = 0;

  static Grid3D make(int n, double L);

  std::size_t size() const { return std::size_t(n) * n * n; }
  double coord(int i) const { return -0.5 * box + dx * i; }
  // k in (2pi/L) * {-n/2, ..., n/2-1}, FFT index order
  double wavenumber(int i) const {
    const double k0 = 2.0 * M_PI / box;
    return k0 * (i <= n / 2 - 1 ? i : i - n);
  }
  std::size_t idx(int ix, int iy, int iz) const {
    return std::size_t(ix) + std::size_t(n) * (std::size_t(iy) + std::size_t(n) * iz);
  }
  bool operator==(const Grid3D& o) const { return n == o.n && box == o.box; }
};

struct Field3D {
  Grid3D grid;
  std::vector<cplx> v;

  Field3D() = default;
  explicit Field3D(const Grid3D& g) : grid(g), v(g.size()) {}
  cplx& at(int ix, int iy, int iz) { return v[grid.idx(ix, iy, iz)]; }
  const cplx& at(int ix, int iy, int iz) const { return v[grid.idx(ix, iy, iz)]; }
};

struct RealField3D {
  Grid3D grid;
  std::vector<double> v;

  RealField3D() = default;
  explicit RealField3D(const Grid3D& g) : grid(g), v(g.size()) {}
};

using Potential3D = RealField3D;

// Quadrature/reduction helpers (h^3-weighted sums over the box).
double field_mass(const Field3D& f);                       // int |f|^2 dx
double max_abs(const Field3D& f);
void fill_abs2(const Field3D& f, RealField3D& out);
cplx field_dot(const Field3D& a, const Field3D& b);        // int conj(a) b dx

// Binary field checkpoint: little-endian "HRTF", u32 n, f64 L, f64 t,
// then n^3 (f64 re, f64 im) pairs, row-major x-fastest.
void write_checkpoint(const std::string& path, const Field3D& f, double t);
Field3D read_checkpoint(const std::string& path, double* t_out = nullptr);

}  // namespace hsl
