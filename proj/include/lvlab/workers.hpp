#pragma once

#include <cstddef>
#include <functional>

namespace lvlab {

// Process-wide cap on helper threads for embarrassingly parallel loops.
// Defaults to 1; the CLI sets it from --workers / LV_LAB_WORKERS.
void set_worker_cap(int workers);
int worker_cap();

// Runs fn(i) for i in [0, count) on up to worker_cap() threads. Results must be
// written to disjoint slots; the call joins before returning.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace lvlab
