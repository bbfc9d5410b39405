// Index-parallel map over nodes.  Every result is written to its own slot,
// so the outcome is independent of the worker count; reductions downstream
// run sequentially in index order.
#pragma once

#include <cstddef>
#include <functional>

namespace krf {

// Worker pool size: WORKERS environment variable, else 1.
int worker_count();

void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace krf
