#pragma once

#include <cstddef>
#include <functional>

namespace gammalab {

/// Worker count: GAMMALAB_THREADS if set and positive, else hardware concurrency.
/// Scheduling only; every reduction in the library runs in index order.
std::size_t worker_count();

/// Calls body(i) for i in [0, n). Blocks of indices go to worker threads;
/// body must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gammalab
