#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace tunnelclock {

/// Worker count: explicit request, else TUNNELCLOCK_THREADS, else hardware.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TUNNELCLOCK_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return unsigned(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// out[i] = fn(i) for i < n. Each index is written by exactly one worker, so the
/// result does not depend on the thread count. The first exception (lowest
/// index) is rethrown after all workers finish.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned threads = 0) {
    std::vector<T> out(n);
    const unsigned nt = std::max(1u, std::min<unsigned>(resolve_threads(threads), unsigned(std::max<std::size_t>(n, 1))));
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::exception_ptr first;
    std::size_t first_index = n;
    std::mutex m;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            // strided assignment keeps expensive neighbouring nodes spread out
            for (std::size_t i = t; i < n; i += nt) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (i < first_index) {
                        first_index = i;
                        first = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
    return out;
}

} // namespace tunnelclock
