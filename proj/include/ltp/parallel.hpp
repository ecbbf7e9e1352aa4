#pragma once

#include <functional>

namespace ltp {

// Worker thread count: the GEO_THREADS environment variable when set to a
// positive integer, otherwise the hardware concurrency (at least 1).
int worker_count();

// Runs fn(i) for every i in [0, n) across contiguous index shards, one
// thread per shard.  Each index runs exactly once and shards are fixed by
// the index arithmetic, so writes into disjoint slots of a preallocated
// buffer need no locking and results do not depend on the thread count.
// The first exception thrown by any fn is rethrown after all threads join.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace ltp
