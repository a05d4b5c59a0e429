#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cfq {

// Runs fn(0..n-1) across a small pool. Results must be written into
// caller-owned slots indexed by i so the output order is deterministic.
inline void parallel_for(int n, const std::function<void(int)>& fn, int n_threads = 0) {
    if (n <= 0) return;
    if (n_threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n_threads = hw > 0 ? int(hw) : 1;
    }
    n_threads = std::min(n_threads, n);
    if (n_threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::atomic<bool> bad{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;

    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= n || bad.load()) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                bad.store(true);
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(size_t(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace cfq
