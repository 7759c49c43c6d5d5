#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace osmosis::par {

/// Current worker cap (>= 1). Defaults to the hardware concurrency.
int max_threads();

/// Caps the number of workers used by parallel regions. Values < 1 mean 1.
void set_max_threads(int n);

/// Runs fn(begin, end) over [0, n) split into chunks of `grain` elements.
/// Chunk boundaries depend only on n and grain, never on the worker count,
/// and chunks write disjoint data, so results are bit-identical for any
/// thread cap.
void for_chunks(std::int64_t n, std::int64_t grain,
                const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Deterministic chunked reduction: per-chunk partial sums are computed in
/// parallel, then combined in chunk order with compensated addition.
double sum_chunks(std::int64_t n, std::int64_t grain,
                  const std::function<double(std::int64_t, std::int64_t)>& partial);

/// Compensated (Kahan) accumulator for sequential sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace osmosis::par
