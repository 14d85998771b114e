#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/ilp.hpp"

namespace tabletop {

/// Benchmark sweep over generated instances. Methods may be any solve
/// method name plus the buffered-set extras "msch", "mch", "mdh",
/// "fvs-ilp" (exact minimum) and "fvs-count" (number of distinct minima).
/// With no `degrees`, instances come from the non-overlapping sampler;
/// otherwise one sweep point per (size, degree) pair.
struct BenchConfig {
    std::vector<int> sizes;
    std::vector<double> degrees;
    std::vector<std::string> methods;
    int instances = 20;
    std::uint64_t seed = 1;
    int max_degree = 4;
    bool unlabeled = false;
    int threads = 0;  ///< 0: one per core
    std::optional<SolveBudget> ilp_budget;
};

struct BenchRow {
    int n = 0;
    double degree = 0.0;
    bool has_degree = false;
    std::string method;
    double mean_time_s = 0.0;
    double mean_distance = 0.0;  ///< buffered-set rows: mean set size or set count
    double mean_grasps = 0.0;
    double mean_ratio_to_exact = 0.0;
    bool has_ratio = false;
    std::string flag;  ///< "", "budget", or "partial"
};

/// Runs the sweep with a deterministic seed per (point, instance) pair and
/// returns rows in sweep order regardless of thread scheduling. Unknown
/// method names raise invalid_argument before any work starts.
std::vector<BenchRow> run_bench(const BenchConfig& config, const IlpEngine& engine);

/// Header line plus one CSV row per entry. Distances use shortest
/// round-trip formatting; times and ratios six decimals.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace tabletop
