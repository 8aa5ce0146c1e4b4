#pragma once

#include <cstddef>
#include <functional>

namespace adelic {

// Worker budget for data-parallel loops; results never depend on it.
void set_thread_budget(int threads);
int thread_budget();

// Calls body(i) for i in [0, n), spread over the thread budget. Each index
// must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace adelic
