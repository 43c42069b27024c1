#pragma once

#include <cstddef>
#include <functional>

namespace relmetric {

// Worker cap for library-internal loops. 0 means "not set": falls back to the
// BOUNDARY_RIGIDITY_THREADS environment variable, then to 1.
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write into
// per-index slots so the result does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace relmetric
