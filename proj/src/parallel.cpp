#include "horolab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace horolab {

int resolve_threads(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int cap = hw;
    if (const char* env = std::getenv("HOROLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) cap = v;
    }
    if (requested <= 0) return cap;
    return std::min(requested, cap);
}

void parallel_batches(std::int64_t total, std::int64_t batch_size, int threads,
                      const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& work) {
    if (total <= 0) return;
    if (batch_size <= 0) batch_size = total;
    const std::int64_t n_batches = (total + batch_size - 1) / batch_size;
    threads = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, n_batches)));

    if (threads == 1) {
        for (std::int64_t b = 0; b < n_batches; ++b)
            work(b, b * batch_size, std::min(total, (b + 1) * batch_size));
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::int64_t b = next.fetch_add(1);
                if (b >= n_batches) break;
                try {
                    work(b, b * batch_size, std::min(total, (b + 1) * batch_size));
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed && failure) std::rethrow_exception(failure);
}

} // namespace horolab
