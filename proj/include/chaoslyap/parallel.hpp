#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chaoslyap {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Work items are claimed
// in index order; callers write results into slot i so output order never
// depends on completion order. The first exception (lowest index) is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned jobs, Body &&body) {
    if (n == 0) return;
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(jobs - 1);
        for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
        worker();
    }
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace chaoslyap
