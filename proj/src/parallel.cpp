#include "triwork/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace triwork {

namespace {
// Nested parallel regions run serially on the calling worker.
thread_local bool t_in_region = false;

struct RegionGuard {
    bool previous;
    RegionGuard() : previous(t_in_region) { t_in_region = true; }
    ~RegionGuard() { t_in_region = previous; }
};
} // namespace

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TRIWORK_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1 || t_in_region) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        RegionGuard guard;
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace triwork
