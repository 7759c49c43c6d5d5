#include "osmosis/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace osmosis::par {

namespace {
std::atomic<int> g_max_threads{0}; // 0 = not set yet, use hardware

int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}
} // namespace

int max_threads() {
    const int n = g_max_threads.load(std::memory_order_relaxed);
    return n > 0 ? n : hardware_threads();
}

void set_max_threads(int n) { g_max_threads.store(std::max(1, n), std::memory_order_relaxed); }

void for_chunks(std::int64_t n, std::int64_t grain,
                const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    grain = std::max<std::int64_t>(1, grain);
    const std::int64_t chunks = (n + grain - 1) / grain;
    const int workers = static_cast<int>(std::min<std::int64_t>(max_threads(), chunks));

    if (workers == 1) {
        for (std::int64_t c = 0; c < chunks; ++c) {
            fn(c * grain, std::min(n, (c + 1) * grain));
        }
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= chunks) return;
            try {
                fn(c * grain, std::min(n, (c + 1) * grain));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 0; t < workers - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double sum_chunks(std::int64_t n, std::int64_t grain,
                  const std::function<double(std::int64_t, std::int64_t)>& partial) {
    if (n <= 0) return 0.0;
    grain = std::max<std::int64_t>(1, grain);
    const std::int64_t chunks = (n + grain - 1) / grain;
    std::vector<double> partials(static_cast<std::size_t>(chunks), 0.0);
    for_chunks(n, grain, [&](std::int64_t begin, std::int64_t end) {
        partials[static_cast<std::size_t>(begin / grain)] = partial(begin, end);
    });
    KahanSum total;
    for (double p : partials) total.add(p);
    return total.sum;
}

} // namespace osmosis::par
