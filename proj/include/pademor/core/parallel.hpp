#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "pademor/core/types.hpp"

namespace pademor {

// Static contiguous chunks; each index is written by exactly one worker, so
// results do not depend on the schedule.
template <class F>
void parallel_for(index_t n, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<index_t>(n, 1))));
    if (threads == 1) {
        for (index_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const index_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const index_t first = t * chunk, last = std::min(n, first + chunk);
        if (first >= last) break;
        pool.emplace_back([&, first, last] {
            try {
                for (index_t i = first; i < last; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pademor
