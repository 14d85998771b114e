#ifndef TABLETOP_FVS_HPP
#define TABLETOP_FVS_HPP

#include <vector>

#include "tabletop/depgraph.hpp"
#include "tabletop/ilp.hpp"

namespace tabletop {

/// Vertex set whose removal leaves the graph acyclic. Construction via
/// make_feedback_vertex_set re-checks that property unconditionally, so a
/// held value is always a genuine feedback vertex set; `certified_optimal`
/// additionally records that an exact method proved minimality.
struct FeedbackVertexSet {
    std::vector<int> vertices;  ///< ascending
    bool certified_optimal = false;

    int size() const { return static_cast<int>(vertices.size()); }
};

/// Throws std::logic_error when removing `vertices` leaves a cycle.
FeedbackVertexSet make_feedback_vertex_set(const DependencyDigraph& g,
                                           std::vector<int> vertices,
                                           bool certified_optimal);

/// Exhaustive reference: subsets by increasing size, lexicographic within a
/// size, first hit wins. Only for graphs with at most 20 vertices.
FeedbackVertexSet fvs_brute_force(const DependencyDigraph& g);

/// Exact method via a linear-ordering program: order the vertices, count
/// backward dependency arcs, map each backward arc to the vertex whose
/// removal breaks every cycle through it. Works per strongly connected
/// component. The result is certified when every component solve finished
/// within budget; otherwise the best incumbent orderings still yield a
/// valid (possibly oversized) set.
FeedbackVertexSet fvs_ilp_constraint(const DependencyDigraph& g, const IlpEngine& engine);

/// Exact method via explicit cycle covering: maximize kept vertices subject
/// to every simple cycle losing at least one vertex. Throws CycleCapError
/// when a component has more than `cycle_cap` simple cycles.
FeedbackVertexSet fvs_ilp_enumerate(const DependencyDigraph& g, const IlpEngine& engine,
                                    long cycle_cap = 100000);

/// Greedy: repeatedly delete the vertex lying on the most still-unbroken
/// simple cycles (lowest id on ties). Needs the full cycle list, so the
/// same cycle cap applies.
FeedbackVertexSet fvs_msch(const DependencyDigraph& g, long cycle_cap = 100000);

/// Greedy: score each vertex by repeatedly finding a shortest cycle
/// through it that starts with an unmarked outgoing arc, marking that arc;
/// delete the top scorer (lowest id on ties) and rescore until acyclic.
FeedbackVertexSet fvs_mch(const DependencyDigraph& g);

/// Greedy: delete the highest-degree vertex (in plus out) among vertices
/// that still lie on some cycle, lowest id on ties, until acyclic.
FeedbackVertexSet fvs_mdh(const DependencyDigraph& g);

/// All minimum feedback vertex sets, assembled per strongly connected
/// component from the cycle-covering program's optimum patterns and crossed
/// between components. Sets ascend internally; the list is sorted. Throws
/// CycleCapError past the cycle cap. `truncated`, when given, reports an
/// enumeration stopped early by budget or the solution cap.
std::vector<FeedbackVertexSet> enumerate_optimal_fvs(const DependencyDigraph& g,
                                                     const IlpEngine& engine,
                                                     long cycle_cap = 100000,
                                                     int max_sets = 100000,
                                                     bool* truncated = nullptr);

}  // namespace tabletop

#endif
