#ifndef TABLETOP_TSP_HPP
#define TABLETOP_TSP_HPP

#include <string>
#include <vector>

#include "tabletop/instance.hpp"

namespace tabletop {

/// Roles a tour-graph vertex can play. Mid vertices force the tour to
/// traverse their pick-place pair; RestMid does the same for the rest
/// poses.
enum class TourVertexKind { RestStart, RestGoal, RestMid, Start, Goal, Mid };

struct TourVertex {
    TourVertexKind kind = TourVertexKind::RestStart;
    int object = -1;  ///< object index for Start/Goal/Mid, -1 for rest vertices
};

/// Complete weighted graph whose cheap Hamiltonian tours are exactly the
/// manipulator's empty-travel orders. Edges not in the allowed structure
/// carry `big_m`, larger than any full tour of allowed edges.
struct TourGraph {
    bool labeled = true;
    std::vector<TourVertex> vertices;
    std::vector<double> weights;  ///< dense row-major
    double big_m = 0.0;

    int size() const { return static_cast<int>(vertices.size()); }
    double weight(int a, int b) const {
        return weights[static_cast<size_t>(a) * static_cast<size_t>(vertices.size()) + static_cast<size_t>(b)];
    }

    int rest_start = -1, rest_goal = -1, rest_mid = -1;
    std::vector<int> start_of, goal_of, mid_of;  ///< vertex index per object
};

/// Tour graph for a labeled instance with mutually disjoint starts and
/// goals: per object a start, goal and mid vertex whose zero-weight path
/// start-mid-goal stands for the (constant-cost) loaded carry. Finite
/// weights: rest_start to every start, rest goal to every goal, goal i to
/// start j for i != j, and the zero-weight rest_start-rest_mid-rest_goal
/// path. Throws std::invalid_argument when some start overlaps some goal
/// or the instance is unlabeled.
TourGraph build_labeled_tour_graph(const Instance& inst);

/// Unlabeled variant: no mid vertices, and goal-start edges exist for all
/// pairs including i == j since any object may claim any goal. Finite tours
/// alternate starts and goals.
TourGraph build_unlabeled_tour_graph(const Instance& inst);

struct Tour {
    std::vector<int> order;  ///< vertex indices, a cycle without repetition
    double length = 0.0;     ///< sum of edge weights around the cycle
};

enum class TourMode { Exact, Heuristic };

/// Contraction of the labeled tour graph onto n+1 nodes (node 0 is the
/// rest pair): cost(i, j) is the empty move goal_i to start_j plus the
/// loaded carry of object j; cost from 0 starts at rest_start and cost to
/// 0 returns to rest_goal. A directed cycle through all nodes costs the
/// plan's full distance term. `loaded_total` is the carry sum all tours
/// share; subtracting it recovers the tour-graph tour length.
struct ContractedAtsp {
    int nodes = 0;
    std::vector<double> cost;  ///< dense row-major
    double loaded_total = 0.0;

    double at(int i, int j) const {
        return cost[static_cast<size_t>(i) * static_cast<size_t>(nodes) + static_cast<size_t>(j)];
    }
};

ContractedAtsp contract_labeled(const Instance& inst);

/// Minimum (Exact) or locally optimized (Heuristic) finite Hamiltonian
/// tour. Exact solving requires at most 16 contracted nodes (n+1 labeled,
/// n+2 unlabeled) and throws SizeLimitError beyond that. Determinism: ties
/// resolve by vertex index, so equal inputs give equal tours.
Tour solve_tour(const TourGraph& g, TourMode mode);

/// Reads the pick-and-place order off a finite tour and prices it against
/// the instance. For unlabeled instances the tour also fixes which goal
/// each object takes. Throws std::invalid_argument when the tour does not
/// have the alternating structure finite tours always have.
ActionPlan retrieve_actions(const TourGraph& g, const Tour& tour, const Instance& inst);

/// TSPLIB-style export of the tour graph: FULL_MATRIX of edge weights
/// scaled by 1000 and rounded (the COMMENT line records the scale).
std::string to_tsplib(const TourGraph& g, const std::string& name);

}  // namespace tabletop

#endif
