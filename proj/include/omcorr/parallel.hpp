#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "omcorr/progress.hpp"

namespace omcorr::detail {

/// Calls fn(i) for i in [0, count) on up to `threads` workers. fn must only
/// write to slot i of its output so that results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Counts finished items and forwards them to a Progress callback.
class ProgressTicker {
public:
    ProgressTicker(const Progress& cb, std::size_t total) : cb_(cb), total_(total) {}
    void tick() {
        if (!cb_) return;
        std::lock_guard lock(mutex_);
        cb_(++done_, total_);
    }

private:
    const Progress& cb_;
    std::size_t total_;
    std::size_t done_ = 0;
    std::mutex mutex_;
};

}  // namespace omcorr::detail
