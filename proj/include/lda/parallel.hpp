#pragma once

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lda {

// Splits [0, total) into one contiguous chunk per worker and runs
// fn(worker_index, begin, end) on each.  Callers that accumulate floating
// point must merge per-worker partials in worker order afterwards; the
// chunking is a pure function of (total, workers), so results are
// reproducible for a fixed worker count.
template <typename Fn>
void for_each_chunk(std::int64_t total, int workers, Fn&& fn) {
    if (workers < 1) throw std::invalid_argument("for_each_chunk: workers < 1");
    if (total < 0) throw std::invalid_argument("for_each_chunk: negative total");
    if (workers == 1 || total <= 1) {
        if (total > 0) fn(0, std::int64_t{0}, total);
        return;
    }
    const int w = static_cast<int>(
        std::min<std::int64_t>(workers, total));
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::exception_ptr error;
    std::mutex error_mu;
    for (int i = 0; i < w; ++i) {
        const std::int64_t begin = total * i / w;
        const std::int64_t end = total * (i + 1) / w;
        pool.emplace_back([&, i, begin, end] {
            try {
                fn(i, begin, end);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lda
