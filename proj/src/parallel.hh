#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace causal::detail
{
    /**
     * Runs task(i) for every i in [0, count) on up to `jobs` threads. Tasks
     * are claimed in ascending order. The first exception thrown by any task
     * is rethrown after all workers have joined.
     */
    template <typename Task_>
    auto parallel_for(std::size_t count, unsigned jobs, Task_ && task) -> void
    {
        jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(count, 1U << 16))));
        if (jobs <= 1) {
            for (std::size_t i = 0; i < count; ++i)
                task(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    task(i);
                }
                catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (! failure)
                        failure = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        };

        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t)
            threads.emplace_back(worker);
        for (auto & t : threads)
            t.join();

        if (failure)
            std::rethrow_exception(failure);
    }

    /// Tracks the smallest chunk index that found a failure, so later chunks can stop early.
    class FirstFailure
    {
    public:
        auto record(std::size_t chunk) -> void
        {
            auto cur = _first.load();
            while (chunk < cur && ! _first.compare_exchange_weak(cur, chunk))
                ;
        }

        auto superseded(std::size_t chunk) const -> bool { return _first.load(std::memory_order_relaxed) < chunk; }

    private:
        std::atomic<std::size_t> _first{static_cast<std::size_t>(-1)};
    };

    inline auto saturating_mul(std::uint64_t a, std::uint64_t b) -> std::uint64_t
    {
        std::uint64_t r;
        if (__builtin_mul_overflow(a, b, &r))
            return static_cast<std::uint64_t>(-1);
        return r;
    }
}
