#ifndef BISAR_PARALLEL_HPP
#define BISAR_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace bisar {

/// Runs fn(i) for i in [begin, end) split into at most `jobs` contiguous
/// chunks, one std::thread per chunk. Results must go to disjoint output
/// slots indexed by i so the run is deterministic regardless of `jobs`.
/// jobs <= 1 (or a single-element range) executes inline on this thread.
/// The first exception thrown by any chunk is rethrown after all join.
inline void parallel_for(std::size_t begin, std::size_t end, int jobs,
                         const std::function<void(std::size_t)>& fn)
{
    const std::size_t count = end > begin ? end - begin : 0;
    if (count == 0)
        return;
    std::size_t workers = jobs > 1 ? static_cast<std::size_t>(jobs) : 1;
    if (workers > count)
        workers = count;

    if (workers == 1) {
        for (std::size_t i = begin; i < end; ++i)
            fn(i);
        return;
    }

    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto run_chunk = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t i = lo; i < hi; ++i)
                fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error)
                first_error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t base = count / workers;
    const std::size_t extra = count % workers;
    std::size_t lo = begin;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t hi = lo + base + (w < extra ? 1 : 0);
        pool.emplace_back(run_chunk, lo, hi);
        lo = hi;
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace bisar

#endif // BISAR_PARALLEL_HPP
