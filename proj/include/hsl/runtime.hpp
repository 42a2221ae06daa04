#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace hsl {

// Global worker cap shared by OpenMP loops and FFTW plans.
void set_threads(int n);
int threads();

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };
LogLevel log_level();  // from HSL_LOG in {error, info, debug}, default error
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

// Splits [0, n) into contiguous chunks, one per worker, and runs fn(i0, i1)
// in parallel. Chunk boundaries depend only on n and threads(), so
// chunk-ordered reductions are deterministic for a fixed thread count.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn);

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hsl
