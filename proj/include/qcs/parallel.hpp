#pragma once

#include <cstddef>
#include <functional>

namespace qcs {

// 0 means "use the hardware concurrency"; never returns less than 1.
int resolve_threads(int requested);

// Runs body(i) for every i in [0, count). Each index is visited exactly once
// and bodies must only write to state owned by their index, which keeps the
// result independent of the thread count. The first exception thrown by any
// body is rethrown after all workers have joined.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace qcs
