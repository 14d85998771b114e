#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/fvs.hpp"
#include "tabletop/ilp.hpp"
#include "tabletop/instance.hpp"
#include "tabletop/mindist.hpp"
#include "tabletop/tsp.hpp"

namespace tabletop {

enum class SolveMethod { Auto, TspExact, TspHeuristic, FvsSingle, FvsComplete, Greedy, Random };

/// "auto", "tsp-exact", "tsp-heur", "fvs-single", "fvs-complete", "greedy",
/// "random" (the CLI spelling).
std::string method_name(SolveMethod m);
std::optional<SolveMethod> method_from_name(const std::string& name);

struct SolveOptions {
    SolveMethod method = SolveMethod::Auto;
    std::uint64_t seed = 0;                   ///< random baseline only
    std::optional<SolveBudget> ilp_budget;    ///< overrides the engine default
    int max_branches = 16;    ///< buffered-set candidates tried by fvs-complete
    int threads = 0;          ///< 0: one per core, capped by branch count
    long cycle_cap = 100000;
};

struct SolveReport {
    std::string method;       ///< resolved concrete method
    ActionPlan plan;
    CostBreakdown cost;
    bool optimal_grasps = false;    ///< grasp count proven minimal
    bool optimal_distance = false;  ///< travel proven minimal among minimal-grasp plans
    bool budget_exhausted = false;
    std::vector<int> buffered_ids;  ///< objects granted a buffer detour
    int dependency_arcs = 0;
    int fvs_size = 0;               ///< extra grasps beyond one per object
    int branches_explored = 0;
    double seconds = 0.0;
};

/// Both tour methods for instances whose starts and goals never overlap.
SolveReport solve_no_overlap(const Instance& inst, TourMode mode);

/// One minimum buffered set (linear-ordering program, greedy fallback when
/// the budget runs out), then travel-optimal scheduling for that set.
SolveReport solve_fvs_single(const Instance& inst, const IlpEngine& engine,
                             const SolveOptions& options = {});

/// Every minimum buffered set (up to options.max_branches), a schedule per
/// set solved concurrently, and the shortest-travel branch kept (lowest
/// branch index on distance ties).
SolveReport solve_fvs_complete(const Instance& inst, const IlpEngine& engine,
                               const SolveOptions& options = {});

SolveReport solve_greedy(const Instance& inst);
SolveReport solve_random(const Instance& inst, std::uint64_t seed);

/// Picks a method from the instance: tour solving when starts and goals are
/// disjoint (exact within size limits, local search beyond), otherwise the
/// scheduling pipeline for small instances and the greedy baseline past it.
SolveReport solve_auto(const Instance& inst, const IlpEngine& engine,
                       const SolveOptions& options = {});

/// Deterministic JSON: everything except `seconds` (timing goes to logs so
/// identical runs stay byte-identical).
std::string report_to_json(const SolveReport& report);

}  // namespace tabletop
