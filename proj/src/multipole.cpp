#include "hsl/multipole.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "hsl/runtime.hpp"

namespace hsl {

namespace {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

const GaussLegendre& gauss_legendre(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussLegendre gl;
  gl.x.resize(n);
  gl.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    gl.x[i] = -x;
    gl.x[n - 1 - i] = x;
    gl.w[i] = gl.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

double legendre_p(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int j = 1; j < n; ++j) {
    const double p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

struct Frame {
  Vec3 e1, e2, e3;
};

// orthonormal frame with e3 along a and, when possible, y in the e1-e3 plane
Frame make_frame(Vec3 a, Vec3 y) {
  Frame f;
  f.e3 = (1.0 / norm(a)) * a;
  Vec3 yp = y - dot(y, f.e3) * f.e3;
  if (norm(yp) > 1e-13 * (norm(y) + 1.0)) {
    f.e1 = (1.0 / norm(yp)) * yp;
  } else {
    Vec3 t = std::fabs(f.e3.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 p = t - dot(t, f.e3) * f.e3;
    f.e1 = (1.0 / norm(p)) * p;
  }
  f.e2 = cross(f.e3, f.e1);
  return f;
}

// radial Gauss-Legendre resampling of a profile, restricted to its grid
struct RadialQuad {
  std::vector<double> s, w, val;
};

RadialQuad radial_quad(const RadialProfile& src, int nq) {
  RadialSpline spline(src);
  const double r_hi = src.grid.r_max;
  const auto& gl = gauss_legendre(nq);
  RadialQuad q;
  q.s.resize(nq);
  q.w.resize(nq);
  q.val.resize(nq);
  for (int i = 0; i < nq; ++i) {
    q.s[i] = 0.5 * r_hi * (gl.x[i] + 1.0);
    q.w[i] = 0.5 * r_hi * gl.w[i];
    q.val[i] = spline.eval(q.s[i]);
  }
  return q;
}

}  // namespace

double eval_F(int k, Vec3 alpha, Vec3 zeta) {
  if (k < 1) throw std::invalid_argument("eval_F: order must be >= 1");
  const double na = norm(alpha);
  if (!(na > 0)) throw std::invalid_argument("eval_F: alpha must be nonzero");
  if (k == 1) return 1.0 / na;
  const double nz = norm(zeta);
  if (nz == 0.0) return 0.0;
  const double ct = dot(alpha, zeta) / (na * nz);
  return std::pow(nz, k - 1) * legendre_p(k - 1, ct) / std::pow(na, k);
}

double truncated_kernel(int N, Vec3 alpha, Vec3 zeta) {
  if (N < 1) throw std::invalid_argument("truncated_kernel: N must be >= 1");
  const double na = norm(alpha), nz = norm(zeta);
  if (!(nz <= 0.5 * na))
    throw std::invalid_argument("truncated_kernel: requires ||zeta|| <= ||alpha||/2");
  double acc = 0;
  for (int k = 1; k <= N; ++k) acc += eval_F(k, alpha, zeta);
  return acc;
}

RemainderFit remainder_scan(int N, double zeta_radius, double alpha_min,
                            double alpha_max, int n_alpha, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vec3> zetas;
  while (zetas.size() < 64) {
    Vec3 z{zeta_radius * unif(rng), zeta_radius * unif(rng), zeta_radius * unif(rng)};
    if (norm(z) <= zeta_radius) zetas.push_back(z);
  }
  Vec3 dir{unif(rng), unif(rng), unif(rng)};
  dir = (1.0 / norm(dir)) * dir;

  std::vector<double> lt, lr;
  double c_fit = 0;
  for (int i = 0; i < n_alpha; ++i) {
    const double t = alpha_min * std::pow(alpha_max / alpha_min, double(i) / (n_alpha - 1));
    const Vec3 a = t * dir;
    double worst = 0;
    for (const Vec3& z : zetas) {
      const double exact = 1.0 / norm(a - z);
      const double rem = std::fabs(exact - truncated_kernel(N, a, z));
      const double scaled = rem / std::pow(1.0 + norm(z), N + 1);
      worst = std::max(worst, scaled);
      c_fit = std::max(c_fit, scaled * std::pow(t, N + 1));
    }
    lt.push_back(std::log(t));
    lr.push_back(std::log(std::max(worst, 1e-300)));
  }
  // least-squares slope of log remainder vs log ||alpha||
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    mx += lt[i];
    my += lr[i];
  }
  mx /= lt.size();
  my /= lr.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    sxx += (lt[i] - mx) * (lt[i] - mx);
    sxy += (lt[i] - mx) * (lr[i] - my);
  }
  return {c_fit, sxy / sxx};
}

double approx_field(int k, const RadialProfile& src_abs2, double lambda_j,
                    double lambda_j1, Vec3 alpha, int j, Vec3 y) {
  if (!(norm(alpha) > 0)) throw std::invalid_argument("approx_field: alpha must be nonzero");
  if (j != 1 && j != 2) throw std::invalid_argument("approx_field: j must be 1 or 2");
  const Vec3 A = (j == 1 ? -1.0 : 1.0) * alpha;
  const Frame f = make_frame(A, y);
  const double nA = norm(A);
  const double y1 = dot(y, f.e1), y3 = dot(y, f.e3);

  const int nq = 400;
  RadialQuad rq = radial_quad(src_abs2, nq);
  // tail-dominance guard stands in for the divergent-moment rejection
  {
    double tail = 0, total = 0;
    for (int i = 0; i < nq; ++i) {
      const double c = std::fabs(rq.w[i] * rq.val[i]) * rq.s[i] * rq.s[i] *
                       std::pow(1.0 + rq.s[i], k + 1);
      total += c;
      if (rq.s[i] > 0.9 * src_abs2.grid.r_max) tail += c;
    }
    if (total > 0 && tail / total > 1e-6)
      throw SolverError("approx_field: source moment of order k+1 not resolved (divergent?)");
  }

  const int nth = k + 2, nph = 2 * k + 4;
  const auto& gth = gauss_legendre(nth);
  double acc = 0;
  for (int i = 0; i < nq; ++i) {
    const double s = rq.s[i];
    const double ls = lambda_j1 * s;
    double ang = 0;
    for (int it = 0; it < nth; ++it) {
      const double mu = gth.x[it];
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int ip_ = 0; ip_ < nph; ++ip_) {
        const double ph = 2.0 * M_PI * ip_ / nph;
        // zeta in the frame: lambda_{j+1} s omega - lambda_j y
        const double z1 = ls * st * std::cos(ph) - lambda_j * y1;
        const double z2 = ls * st * std::sin(ph);
        const double z3 = ls * mu - lambda_j * y3;
        const double nz = std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
        double F;
        if (k == 1) {
          F = 1.0 / nA;
        } else if (nz == 0.0) {
          F = 0.0;
        } else {
          F = std::pow(nz, k - 1) * legendre_p(k - 1, z3 / nz) / std::pow(nA, k);
        }
        ang += gth.w[it] * F;
      }
    }
    ang *= 2.0 * M_PI / nph;
    acc += rq.w[i] * rq.val[i] * s * s * ang;
  }
  return -lambda_j * lambda_j / (4.0 * M_PI * lambda_j1) * acc;
}

double exact_field(const RadialProfile& src_abs2, double lambda_j,
                   double lambda_j1, Vec3 alpha, int j, Vec3 y) {
  if (!(norm(alpha) > 0)) throw std::invalid_argument("exact_field: alpha must be nonzero");
  const Vec3 A = (j == 1 ? -1.0 : 1.0) * alpha;
  const Frame f = make_frame(A, y);
  const double nA = norm(A);
  const double y1 = dot(y, f.e1), y3 = dot(y, f.e3);

  const int nq = 400, nth = 64, nph = 128;
  RadialQuad rq = radial_quad(src_abs2, nq);
  const auto& gth = gauss_legendre(nth);
  double acc = 0;
  for (int i = 0; i < nq; ++i) {
    const double s = rq.s[i];
    const double ls = lambda_j1 * s;
    double ang = 0;
    for (int it = 0; it < nth; ++it) {
      const double mu = gth.x[it];
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int ip_ = 0; ip_ < nph; ++ip_) {
        const double ph = 2.0 * M_PI * ip_ / nph;
        const double z1 = ls * st * std::cos(ph) - lambda_j * y1;
        const double z2 = ls * st * std::sin(ph);
        const double z3 = ls * mu - lambda_j * y3;
        // ||A - zeta|| with A = nA e3
        const double d1 = -z1, d2 = -z2, d3 = nA - z3;
        ang += gth.w[it] / std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
      }
    }
    ang *= 2.0 * M_PI / nph;
    acc += rq.w[i] * rq.val[i] * s * s * ang;
  }
  return -lambda_j * lambda_j / (4.0 * M_PI * lambda_j1) * acc;
}

}  // namespace hsl
