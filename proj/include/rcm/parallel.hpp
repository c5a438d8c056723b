#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace rcm {

// Runs job(i) for i in [0, count) on up to `workers` threads and returns the
// results in index order, so aggregation never depends on scheduling.
// The first exception thrown by any job is rethrown after all threads join.
template <class Job>
auto run_indexed(std::size_t count, unsigned workers, Job job) -> std::vector<decltype(job(std::size_t{}))>
{
    using Result = decltype(job(std::size_t{}));
    static_assert(!std::is_same_v<Result, bool>, "vector<bool> elements cannot be written concurrently");
    std::vector<Result> results(count);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            results[i] = job(i);
        return results;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            // strided assignment balances replicas of uneven cost
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    results[i] = job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return results;
}

} // namespace rcm
