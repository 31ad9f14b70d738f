/**
 * @file parallel.hpp
 * @brief Minimal block-parallel loop. Work is split into fixed blocks so that
 *        results reduced in block order do not depend on the thread count.
 */

#ifndef GROUNDSOUND_PARALLEL_HPP
#define GROUNDSOUND_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace groundsound {

namespace detail {
inline std::atomic<int>& thread_setting()
{
    static std::atomic<int> n{1};
    return n;
}
} // namespace detail

/// Worker count used by the data-parallel loops; 0 means hardware concurrency.
inline void set_thread_count(int n)
{
    detail::thread_setting() = n;
}

inline int thread_count()
{
    const int n = detail::thread_setting();
    if (n > 0)
        return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(block) for block in [0, blocks). The first exception is rethrown.
template <class F>
void parallel_blocks(std::size_t blocks, F&& fn)
{
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b)
            fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t b = next++;
            if (b >= blocks)
                return;
            try {
                fn(b);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = blocks;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace groundsound

#endif
