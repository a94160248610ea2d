#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace horolab {

/// Effective worker count: min(requested, HOROLAB_THREADS env cap, hardware).
/// requested <= 0 means "as many as allowed".
int resolve_threads(int requested = 0);

/// Runs work(batch_index, lo, hi) over the partition of [0, total) into
/// chunks of batch_size. Batches may execute on any thread in any order, so
/// the work function must confine its writes to per-batch slots; merging in
/// batch order afterwards keeps results independent of the schedule.
void parallel_batches(std::int64_t total, std::int64_t batch_size, int threads,
                      const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& work);

/// compensated accumulator (Kahan-Babuska / Neumaier) for order-stable merges
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

} // namespace horolab
