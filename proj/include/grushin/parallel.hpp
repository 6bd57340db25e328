#pragma once

#include <cstddef>
#include <functional>

namespace grushin {

// Worker count used by sweeps; 1 runs inline.
void set_thread_count(int n);
int thread_count();

// Calls body(i) for i in [0, count); results must be written to per-index slots
// so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace grushin
