#include "descentlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace descentlab {

unsigned default_threads() {
  if (const char* env = std::getenv("DESCENTLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace descentlab
