#pragma once

#include <cstdlib>
#include <utility>

#include <omp.h>

namespace spinform::par {

// Execution policy for the grid kernels. Every parallel kernel has a serial
// twin that produces bit-identical results; tests compare the two and the
// bench target times them against each other.
enum class Exec { serial, openmp };

// Worker cap: SPINFORM_THREADS if set and positive, else the OpenMP default.
inline int max_threads() {
    if (const char* s = std::getenv("SPINFORM_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
}

template <typename Body>
void for_each(int n, Exec exec, Body&& body) {
    if (exec == Exec::openmp) {
        const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
        for (int i = 0; i < n; ++i) body(i);
    } else {
        for (int i = 0; i < n; ++i) body(i);
    }
}

}  // namespace spinform::par
