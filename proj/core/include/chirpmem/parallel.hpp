#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chirpmem {

/// Calls body(i) for every i in [0, n) using up to `workers` threads.
///
/// Indices are split into contiguous blocks, so results written by index are
/// independent of the worker count.  The first exception thrown by any worker
/// is rethrown after all threads have joined.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body)
{
    const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        const std::size_t begin = n * w / threads;
        const std::size_t end = n * (w + 1) / threads;
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Default worker count: hardware concurrency, at least 1.
inline unsigned default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace chirpmem
