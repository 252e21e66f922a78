#pragma once

#include <cstddef>
#include <functional>

namespace lplab {

// Worker count: LPLAB_THREADS if set, else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Work items must write only to their own slots;
// callers reduce results in index order so output does not depend on the
// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lplab
