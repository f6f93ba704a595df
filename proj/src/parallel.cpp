#include "hetquant/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetquant {

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HETQUANT_THREADS"); env != nullptr && *env != '\0') {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec == std::errc() && value > 0) return value;
  }
#ifdef _OPENMP
  return std::max(1, omp_get_num_procs());
#else
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
#endif
}

}  // namespace hetquant
