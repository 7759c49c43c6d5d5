#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osmosis/solvers.hpp"

namespace osmosis {

struct BenchRow {
    std::string label;
    long long pixels = 0;
    Scheme scheme = Scheme::Mos;
    double tau = 0.0;
    int iterations = 0;
    double seconds_total = 0.0;
    double seconds_per_iter = 0.0;
    double pixels_per_second = 0.0;
    double peak_rss_mb = 0.0;
};

/// Times `iterations` steps of the configured scheme on a seeded synthetic
/// image of `pixels` total pixels (near-square). One untimed warmup step.
BenchRow bench_fixed_iterations(long long pixels, const SchemeConfig& cfg, int iterations,
                                std::uint64_t seed);

/// Runs explicit Euler (at its stability-limited tau) and MOS to the same
/// steady tolerance on one synthetic instance; reports iterations used.
std::vector<BenchRow> bench_scheme_comparison(long long pixels, double mos_tau,
                                              double steady_tol, int max_steps,
                                              std::uint64_t seed);

/// CSV report: context header lines with published large-image throughput
/// figures, then one row per entry.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Peak resident set size of this process in MB (0 if unavailable).
double peak_rss_mb();

} // namespace osmosis
