#pragma once

#include <functional>

namespace extremo {

// Worker count for parallel sections: EXTREMO_THREADS if set and positive,
// otherwise the hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, count) across worker threads. Iterations must be
// independent; exceptions are captured and the first one is rethrown after all
// workers finish.
void parallel_for(long count, const std::function<void(long)>& fn);

}  // namespace extremo
