#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace evosi {

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

// out[i] = fn(i) for i in [0, count). Results land by index, so the output does not
// depend on how many workers ran or in which order they picked up work.
template <class T, class F>
std::vector<T> parallel_map(std::int64_t count, int workers, F&& fn) {
    std::vector<T> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    workers = std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(count, 1));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    constexpr std::int64_t chunk = 64;
    std::atomic<std::int64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        try {
            for (;;) {
                std::int64_t b = next.fetch_add(chunk);
                if (b >= count) break;
                std::int64_t e = std::min(count, b + chunk);
                for (std::int64_t i = b; i < e; ++i) out[i] = fn(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err) err = std::current_exception();
            next.store(count);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace evosi
