#include "parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef MONOSIM_HAVE_OPENMP
#include <omp.h>
#endif

namespace monosim::detail {

int kernel_threads() {
    static const int threads = [] {
        int fallback = 1;
#ifdef MONOSIM_HAVE_OPENMP
        fallback = omp_get_max_threads();
#endif
        if (const char* env = std::getenv("MONOSIM_THREADS")) {
            try {
                const int n = std::stoi(env);
                if (n > 0) return n;
            } catch (const std::exception&) {
            }
        }
        return std::max(fallback, 1);
    }();
    return threads;
}

int threads_for(std::size_t work, std::size_t min_work_per_thread) {
    const auto by_work = static_cast<int>(work / std::max<std::size_t>(min_work_per_thread, 1));
    return std::clamp(by_work, 1, kernel_threads());
}

}  // namespace monosim::detail
