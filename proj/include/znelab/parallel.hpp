#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace znelab {

// Every parallel kernel in this project also has a serial path. The two
// must produce bitwise-identical results: parallelism is only ever over
// independent output slots, never over a floating-point reduction.
enum class ExecutionPolicy { Serial, OpenMP };

inline int worker_count(ExecutionPolicy policy) {
#ifdef _OPENMP
    return policy == ExecutionPolicy::OpenMP ? omp_get_max_threads() : 1;
#else
    (void)policy;
    return 1;
#endif
}

// Runs body(i) for i in [0, count). Each index must write only its own slot.
template <typename Body>
void for_each_index(std::size_t count, ExecutionPolicy policy, Body&& body) {
#ifdef _OPENMP
    if (policy == ExecutionPolicy::OpenMP) {
        const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) {
        body(i);
    }
}

} // namespace znelab
