#include "hsl/runtime.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace hsl {

namespace {
std::atomic<int> g_threads{0};

int default_threads() {
  int hw = omp_get_max_threads();
  return std::max(1, std::min(hw, 8));
}
}  // namespace

void set_threads(int n) {
  if (n < 1) throw std::invalid_argument("threads must be >= 1");
  g_threads.store(n);
}

int threads() {
  int t = g_threads.load();
  if (t == 0) {
    t = default_threads();
    g_threads.store(t);
  }
  return t;
}

LogLevel log_level() {
  static LogLevel lvl = [] {
    const char* e = std::getenv("HSL_LOG");
    if (!e) return LogLevel::Error;
    if (!std::strcmp(e, "debug")) return LogLevel::Debug;
    if (!std::strcmp(e, "info")) return LogLevel::Info;
    return LogLevel::Error;
  }();
  return lvl;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::fprintf(stderr, "[hsl] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) std::fprintf(stderr, "[hsl:dbg] %s\n", msg.c_str());
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  const int nt = std::min<std::size_t>(threads(), std::max<std::size_t>(n, 1));
  if (nt <= 1 || n < 4096) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + nt - 1) / nt;
#pragma omp parallel for num_threads(nt) schedule(static, 1)
  for (int c = 0; c < nt; ++c) {
    const std::size_t i0 = c * chunk;
    const std::size_t i1 = std::min(n, i0 + chunk);
    if (i0 < i1) fn(i0, i1);
  }
}

}  // namespace hsl
