#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adasurv {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Tasks must be
// independent; results may not depend on the schedule.
template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& fn) {
    size_t workers_wanted = std::min(static_cast<size_t>(resolve_threads(threads)), n);
    if (workers_wanted <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(workers_wanted);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (size_t w = 0; w < workers_wanted; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (size_t i = w; i < n; i += workers_wanted) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace adasurv
