#pragma once

// Deterministic parallel map: results land in pre-assigned slots so the
// output order never depends on thread scheduling.  Worker count is capped by
// hardware concurrency and the TRANSONIC_MAX_WORKERS environment variable.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace transonic {

inline unsigned worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* cap = std::getenv("TRANSONIC_MAX_WORKERS")) {
        try {
            long v = std::stol(cap);
            if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
        } catch (...) {
            // Unparsable cap: ignore and use hardware concurrency.
        }
    }
    if (jobs < hw) hw = static_cast<unsigned>(jobs);
    return hw == 0 ? 1 : hw;
}

/// Evaluate fn(0..n-1) and return results in index order.  fn must be safe to
/// call concurrently on distinct indices.  The first worker exception (lowest
/// worker id) is rethrown on the calling thread after all workers join.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<R> out(n);
    unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace transonic
