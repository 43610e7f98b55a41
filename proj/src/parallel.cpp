#include "bergman/parallel.hpp"

#include <cstdlib>
#include <string>

namespace bergman {

unsigned default_thread_count() {
    if (const char* env = std::getenv("BERGMAN_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace bergman
