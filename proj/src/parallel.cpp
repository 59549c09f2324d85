#include "evd/parallel.hpp"

#include <cstdlib>
#include <string>

namespace evd {

unsigned default_threads() {
  if (const char* env = std::getenv("EVD_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace evd
