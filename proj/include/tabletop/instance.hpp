#ifndef TABLETOP_INSTANCE_HPP
#define TABLETOP_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/geometry.hpp"

namespace tabletop {

/// One movable disc with its start and goal placement.
struct ObjectSpec {
    int id = 0;
    double radius = 0.5;
    Pose start;
    Pose goal;
};

/// Cost model weights: c_m scales travelled distance, c_g and c_r are the
/// fixed grasp and release charges per pick-and-place action.
struct CostParams {
    double c_m = 1.0;
    double c_g = 1.0;
    double c_r = 1.0;
};

/// A rearrangement problem: discs on a bounded table, a manipulator rest
/// pose before and after the task, and optional buffer poses used when
/// start and goal footprints overlap.
struct Instance {
    Rect workspace;
    Pose rest_start;  ///< manipulator pose before the first pick
    Pose rest_goal;   ///< manipulator pose after the last release
    std::vector<Pose> buffers;
    bool labeled = true;  ///< false: goals are interchangeable between objects
    CostParams cost;
    std::vector<ObjectSpec> objects;

    int num_objects() const { return static_cast<int>(objects.size()); }
};

/// One pick-and-place: grasp `object_id` at `pick`, release it at `place`.
/// `d_e` is the empty-handed approach distance from the previous release
/// (or from rest_start for the first action); `d_l` the loaded carry.
struct Action {
    int object_id = 0;
    Pose pick;
    Pose place;
    double d_e = 0.0;
    double d_l = 0.0;
};

/// Ordered action sequence plus the final empty-handed return `d_f` from the
/// last release to rest_goal.
struct ActionPlan {
    std::vector<Action> actions;
    double d_f = 0.0;

    int grasp_count() const { return static_cast<int>(actions.size()); }
    /// Sum of all d_e and d_l fields plus d_f.
    double distance_total() const;
};

struct CostBreakdown {
    int grasps = 0;
    double distance = 0.0;  ///< c_m-weighted travel argument: sum(d_e + d_l) + d_f
    double total = 0.0;     ///< grasps * (c_g + c_r) + c_m * distance
};

/// Checks the plan's distance bookkeeping against the instance geometry and
/// returns the cost breakdown. Throws std::invalid_argument when a d_e, d_l
/// or d_f field disagrees with the recorded poses by more than 1e-9, when an
/// object id is unknown, or when d_f does not continue from the last place
/// pose (for an empty plan, d_f must equal dist(rest_start, rest_goal)).
CostBreakdown plan_cost(const Instance& inst, const ActionPlan& plan);

/// Structural checks: finite poses inside the workspace, positive radii,
/// unique ids, pairwise disjoint goals, and every buffer disjoint from all
/// starts and goals. Returns human-readable violations, empty when valid.
std::vector<std::string> validate(const Instance& inst);

/// True when no start footprint overlaps any goal footprint (goal placements
/// never require clearing a start first).
bool starts_goals_disjoint(const Instance& inst);

/// Physically replays a plan: every pick must match the object's current
/// pose, every release must land on a vacant footprint, and the final state
/// must have each object on a goal (its own goal when inst.labeled).
/// Returns violations, empty when the plan executes cleanly.
std::vector<std::string> replay_plan(const Instance& inst, const ActionPlan& plan);

/// Deterministic instance sampler: 2n pairwise disjoint discs of the given
/// radius (starts and goals all mutually disjoint), labeled, no buffers.
/// `workspace` defaults to a square sized for comfortable rejection
/// sampling at this n. Throws SamplingError when the attempt budget of
/// 1000*n placements runs out.
Instance generate_no_overlap(int n, std::uint64_t seed, double radius = 0.5,
                             std::optional<Rect> workspace = std::nullopt);

/// Deterministic sampler for instances whose dependency graph has roughly
/// n*avg_degree/2 arcs (average total degree within 10% of avg_degree,
/// maximum in- and out-degree at most max_degree). Starts are placed onto
/// chosen goal footprints to realise the planned arcs and nowhere else.
/// Also places `num_buffers` poses (default n) disjoint from everything.
/// Requires 0 <= avg_degree <= 4 and max_degree >= 1.
Instance generate_with_overlap(int n, double avg_degree, int max_degree,
                               std::uint64_t seed, int num_buffers = -1,
                               double radius = 0.5,
                               std::optional<Rect> workspace = std::nullopt);

/// JSON round trip. Parsing accepts exactly the schema produced by
/// to_json; malformed documents raise std::invalid_argument with the
/// offending key in the message.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

std::string plan_to_json(const ActionPlan& plan);
ActionPlan plan_from_json(const std::string& text);

}  // namespace tabletop

#endif
