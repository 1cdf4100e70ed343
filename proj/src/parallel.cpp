#include "paritylock/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace paritylock {

namespace {
std::atomic<int> g_threads{1};
}

void set_default_threads(int n) { g_threads = std::max(1, n); }
int default_threads() { return g_threads; }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int threads) {
    if (threads <= 0) threads = default_threads();
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next++;
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace paritylock
