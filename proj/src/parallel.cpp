#include "cartan/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cartan {

int worker_count() {
  if (const char* env = std::getenv("CARTAN_ENTROPY_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace cartan
