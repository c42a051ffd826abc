#include "simspace/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace simspace {

int jobs_from_env() {
  const char* raw = std::getenv("SIMSPACE_JOBS");
  if (raw == nullptr) return 1;
  int jobs = 0;
  auto [ptr, ec] = std::from_chars(raw, raw + std::strlen(raw), jobs);
  if (ec != std::errc() || *ptr != '\0' || jobs < 1) return 1;
  return jobs;
}

}  // namespace simspace
