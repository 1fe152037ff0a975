#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace triwork {

// Worker cap from TRIWORK_THREADS; hardware concurrency when unset or invalid.
unsigned worker_count();

// Calls fn(i) for i in [0, n) across worker threads. Each index is handled
// exactly once; fn must only write to storage owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Evaluates fn at every index in parallel and returns the results in index
// order, so any reduction over the result is independent of scheduling.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace triwork
