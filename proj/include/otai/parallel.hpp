#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace otai {

/// Runs fn(i) for i in [0, n) across up to `threads` workers. Each index is
/// processed exactly once; callers that write fn's result into slot i of a
/// preallocated buffer get output identical to a sequential run. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const int workers =
        std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(
                                               n, std::thread::hardware_concurrency()))));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                              static_cast<std::size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace otai
