#ifndef TESTS_ORACLES_HPP
#define TESTS_ORACLES_HPP

// Reference implementations used to cross-check the library. Everything in
// here is deliberately written from scratch with the dumbest correct
// algorithm available (exhaustive enumeration), sharing no code with the
// solver beyond the public data types.

#include <cstdint>
#include <utility>
#include <vector>

#include "tabletop/ilp.hpp"
#include "tabletop/instance.hpp"

namespace oracle {

// ---- directed graph references (plain arc lists, no DependencyDigraph) ----

/// Kahn-style check that the subgraph keeping exactly the vertices with
/// `removed_mask` bit 0 has no directed cycle.
bool residual_acyclic(int n, const std::vector<std::pair<int, int>>& arcs,
                      std::uint32_t removed_mask);

/// Minimum number of vertices whose removal leaves the graph acyclic,
/// by scanning all 2^n subsets. n <= 20.
int min_fvs_size(int n, const std::vector<std::pair<int, int>>& arcs);

/// Every minimum-cardinality feedback vertex set, each ascending, the list
/// sorted. n <= 16.
std::vector<std::vector<int>> all_min_fvs(int n, const std::vector<std::pair<int, int>>& arcs);

/// All simple directed cycles, each rotated to start at its smallest vertex,
/// sorted by length then lexicographically. n <= 10.
std::vector<std::vector<int>> all_simple_cycles(int n,
                                                const std::vector<std::pair<int, int>>& arcs);

// ---- tour references ----

/// Minimum distance term (sum of empty and loaded legs plus the final
/// return) over all n! visit orders of a labeled instance whose starts and
/// goals are disjoint. n <= 8.
double best_labeled_distance(const tabletop::Instance& inst);

/// Unlabeled variant: minimum over all visit orders and all object-to-goal
/// assignments. n <= 5.
double best_unlabeled_distance(const tabletop::Instance& inst);

// ---- 0/1 program reference ----

struct IlpReference {
    bool feasible = false;
    double objective = 0.0;       ///< meaningful only when feasible
    long optimum_count = 0;       ///< assignments within 1e-9 of the optimum
    std::vector<std::uint8_t> best;  ///< lexicographically first optimum
};

/// Checks all 2^n assignments (n <= 22) against the rows with absolute
/// tolerance 1e-9 and returns the optimum for the model's sense.
IlpReference solve_ilp_exhaustive(const tabletop::IlpModel& model);

// ---- overlap scheduling reference ----

/// Minimum travel over every executable (n+p)-action sequence in which the
/// objects in `buffered` (ascending ids) detour through one of the first p
/// buffer poses and everything else moves start to goal directly.
/// Placements must land on footprints vacant at that moment. Returns a
/// negative value when no executable sequence exists. Labeled instances
/// only, n + p <= 8.
double best_schedule_distance(const tabletop::Instance& inst, const std::vector<int>& buffered);

/// True when at least one executable sequence exists for this buffered set.
bool schedule_exists(const tabletop::Instance& inst, const std::vector<int>& buffered);

// ---- shared fixtures ----

/// Two discs that must swap places through the single buffer: the
/// dependency digraph is the 2-cycle {(0,1),(1,0)} and the unique optimal
/// 3-action schedule stashes object 0, moves object 1 directly, then
/// retrieves object 0.
tabletop::Instance swap_instance();

/// Three discs in a line with arcs (0,1) and (1,2): acyclic, movable order
/// [2, 1, 0], no buffer needed.
tabletop::Instance chain_instance();

}  // namespace oracle

#endif
