#pragma once

#include <cstddef>

namespace monosim::detail {

/// Thread cap for numeric kernels: MONOSIM_THREADS if set and positive,
/// otherwise the OpenMP default (1 when built without OpenMP).
int kernel_threads();

/// Threads to use for a loop of `work` independent items; small loops run
/// serially so single-cell problems do not pay thread start-up costs.
int threads_for(std::size_t work, std::size_t min_work_per_thread = 4096);

}  // namespace monosim::detail
