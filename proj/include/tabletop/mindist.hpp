#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabletop/ilp.hpp"
#include "tabletop/instance.hpp"

namespace tabletop {

/// Minimum-travel scheduling for instances whose starts and goals overlap.
///
/// A chosen set of "buffered" objects (which must hit every dependency
/// cycle) is granted a detour through a buffer spot: each buffered object
/// is moved twice, every other object exactly once, for n + p actions in
/// total. The schedule and the travel it costs are optimized jointly by a
/// 0/1 program over a time-expanded graph with T = n + p steps.

enum class SpotKind : uint8_t { RestStart, RestGoal, Start, Goal, Buffer };

struct Spot {
    SpotKind kind = SpotKind::RestStart;
    int index = -1;  // object index for Start/Goal, buffer slot for Buffer

    bool operator==(const Spot& o) const { return kind == o.kind && index == o.index; }
};

/// One edge variable of the time-expanded graph. `loaded` edges carry an
/// object and arrive at its placement on step `t`; empty edges arrive at
/// the step-`t` pick. `object` is the object index being carried (loaded
/// edges) or picked next (empty edges into a start or buffer).
struct EdgeVar {
    int var = -1;
    Spot from, to;
    int t = 0;
    bool loaded = false;
    int object = -1;
    double length = 0.0;
};

struct TimeExpandedModel {
    IlpModel model;
    int n = 0;          // objects
    int p = 0;          // buffered objects = buffer slots in use
    int horizon = 0;    // T = n + p
    std::vector<int> buffered;     // ascending object indices
    std::vector<EdgeVar> edges;
    // Occupancy variable ids for steps t = 1..T-1, indexed [.][t-1]:
    // object i still on its start / already on its goal, and buffered
    // object j (list position) parked in slot k.
    std::vector<std::vector<int>> start_occ, goal_occ;
    std::vector<std::vector<std::vector<int>>> buffer_occ;
};

/// Builds the scheduling program. `buffered` must list object indices whose
/// removal leaves the dependency digraph acyclic, and the instance must
/// provide at least that many buffer spots; otherwise invalid_argument.
TimeExpandedModel build_mindist_model(const Instance& inst, const std::vector<int>& buffered);

struct MindistResult {
    SolveStatus status = SolveStatus::Infeasible;
    ActionPlan plan;       // meaningful when status == Optimal
    double distance = 0.0; // plan distance term
    long nodes_explored = 0;
};

/// Solves the scheduling program for one buffered set and decodes the edge
/// assignment into an action plan, verified by geometric replay. A simple
/// stash-all-then-place schedule seeds the search.
MindistResult solve_mindist(const Instance& inst, const std::vector<int>& buffered,
                            const IlpEngine& engine, const SolveBudget* budget = nullptr);

/// Baseline: objects in id order; anything parked on an object's goal is
/// stashed to the lowest free buffer first. Throws runtime_error when a
/// stash is needed but no buffer is free.
ActionPlan greedy_plan(const Instance& inst);

/// Baseline for non-overlapping instances: a uniformly random move order
/// (and, when unlabeled, a random goal assignment). Throws invalid_argument
/// if any goal overlaps any start.
ActionPlan random_plan(const Instance& inst, uint64_t seed);

}  // namespace tabletop
