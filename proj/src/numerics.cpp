#include "mz/numerics.hpp"

#include <cstdlib>
#include <thread>

namespace mz {

namespace {
constexpr std::size_t kBlock = 64;
int g_override = 0;
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void set_worker_override(int n) { g_override = n > 0 ? n : 0; }

int worker_count() {
  if (g_override > 0) return g_override;
  if (const char* env = std::getenv("MZ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace mz
