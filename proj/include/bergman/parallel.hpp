#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bergman {

/// Worker count: BERGMAN_THREADS if set and positive, else hardware concurrency.
unsigned default_thread_count();

/// Evaluates fn(i) for i in [0, n) and returns the results in index order.
/// Tasks must be independent; the output does not depend on the thread count.
/// If any task throws, the exception of the lowest failing index is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn, unsigned threads = 0) {
    using Result = decltype(fn(std::size_t{0}));
    std::vector<Result> results(n);
    std::vector<std::exception_ptr> errors(n);
    if (threads == 0) threads = default_thread_count();
    if (threads > n) threads = static_cast<unsigned>(n);

    auto run = [&](std::size_t i) {
        try {
            results[i] = fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) run(i);
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace bergman
