#include "hsl/grid.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "hsl/runtime.hpp"

namespace hsl {

Grid3D Grid3D::make(int n, double L) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Grid3D: n must be a power of two >= 8");
  if (!(L > 0)) throw std::invalid_argument("Grid3D: box length must be positive");
  Grid3D g;
  g.n = n;
  g.box = L;
  g.dx = L / n;
  return g;
}

double field_mass(const Field3D& f) {
  const std::size_t n = f.v.size();
  std::vector<double> partial;
  double acc = 0.0;
  // chunk-ordered reduction keeps the result deterministic per thread count
  const int nt = threads();
  partial.assign(nt, 0.0);
  const std::size_t chunk = (n + nt - 1) / nt;
  parallel_chunks(n, [&](std::size_t i0, std::size_t i1) {
    partial[i0 / chunk] = kernels::sum_abs2(f.v.data() + i0, i1 - i0);
  });
  for (double p : partial) acc += p;
  const double h = f.grid.dx;
  return acc * h * h * h;
}

double max_abs(const Field3D& f) {
  double m = 0.0;
  for (const auto& z : f.v) {
    const double a = std::norm(z);
    if (a > m) m = a;
  }
  return std::sqrt(m);
}

void fill_abs2(const Field3D& f, RealField3D& out) {
  out.grid = f.grid;
  out.v.resize(f.v.size());
  parallel_chunks(f.v.size(), [&](std::size_t i0, std::size_t i1) {
    kernels::abs2(f.v.data() + i0, out.v.data() + i0, i1 - i0);
  });
}

cplx field_dot(const Field3D& a, const Field3D& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field_dot: grid mismatch");
  const std::size_t n = a.v.size();
  const int nt = threads();
  std::vector<cplx> partial(nt, cplx(0, 0));
  const std::size_t chunk = (n + nt - 1) / nt;
  parallel_chunks(n, [&](std::size_t i0, std::size_t i1) {
    partial[i0 / chunk] = kernels::dot(a.v.data() + i0, b.v.data() + i0, i1 - i0);
  });
  cplx acc(0, 0);
  for (auto p : partial) acc += p;
  const double h = a.grid.dx;
  return acc * (h * h * h);
}

namespace {
struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace

void write_checkpoint(const std::string& path, const Field3D& f, double t) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("checkpoint: cannot open " + path);
  const char magic[4] = {'H', 'R', 'T', 'F'};
  const std::uint32_t n = f.grid.n;
  const double L = f.grid.box;
  if (std::fwrite(magic, 1, 4, fp.get()) != 4 ||
      std::fwrite(&n, sizeof n, 1, fp.get()) != 1 ||
      std::fwrite(&L, sizeof L, 1, fp.get()) != 1 ||
      std::fwrite(&t, sizeof t, 1, fp.get()) != 1)
    throw std::runtime_error("checkpoint: header write failed");
  // std::complex<double> is layout-compatible with (f64 re, f64 im)
  if (std::fwrite(f.v.data(), sizeof(cplx), f.v.size(), fp.get()) != f.v.size())
    throw std::runtime_error("checkpoint: data write failed");
}

Field3D read_checkpoint(const std::string& path, double* t_out) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  std::uint32_t n = 0;
  double L = 0, t = 0;
  if (std::fread(magic, 1, 4, fp.get()) != 4 || std::memcmp(magic, "HRTF", 4) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  if (std::fread(&n, sizeof n, 1, fp.get()) != 1 ||
      std::fread(&L, sizeof L, 1, fp.get()) != 1 ||
      std::fread(&t, sizeof t, 1, fp.get()) != 1)
    throw std::runtime_error("checkpoint: truncated header in " + path);
  Field3D f(Grid3D::make(int(n), L));
  if (std::fread(f.v.data(), sizeof(cplx), f.v.size(), fp.get()) != f.v.size())
    throw std::runtime_error("checkpoint: truncated data in " + path);
  if (t_out) *t_out = t;
  return f;
}

}  // namespace hsl
