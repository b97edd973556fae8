#pragma once

#include <functional>

namespace specbill {

// Worker count: SPECBILL_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n) on up to thread_count() workers. Blocks until all
// complete. fn must not touch shared mutable state; exceptions propagate (the
// first one thrown is rethrown after join).
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace specbill
