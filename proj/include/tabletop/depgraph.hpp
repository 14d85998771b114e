#ifndef TABLETOP_DEPGRAPH_HPP
#define TABLETOP_DEPGRAPH_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabletop/instance.hpp"

namespace tabletop {

/// Directed graph over object indices 0..n-1. An arc (i, j) records that
/// object i's goal footprint overlaps object j's start footprint: o_j must
/// vacate its start before o_i can be placed. Self loops are rejected.
struct DependencyDigraph {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;       ///< sorted, duplicate-free
    std::vector<std::vector<int>> out_adj;       ///< successors, ascending
    std::vector<std::vector<int>> in_adj;        ///< predecessors, ascending

    static DependencyDigraph from_arcs(int n, std::vector<std::pair<int, int>> arcs);

    bool has_arc(int i, int j) const;
    int num_arcs() const { return static_cast<int>(arcs.size()); }

    /// Subgraph induced by `verts` (need not be sorted); vertices are
    /// relabeled 0..k-1 in the order given.
    DependencyDigraph induced(const std::vector<int>& verts) const;

    /// Same vertex set with all arcs touching `removed` dropped.
    DependencyDigraph without(const std::vector<int>& removed) const;

    bool acyclic() const;
};

/// Arc (i, j) for every goal-over-start overlap between distinct objects.
/// Vertex v corresponds to inst.objects[v].
DependencyDigraph build_dependency_graph(const Instance& inst);

/// Strongly connected components in reverse topological order (every arc
/// leaving a component points to an earlier-listed component). Vertices
/// within a component are listed ascending.
struct SccDecomposition {
    std::vector<int> component_of;
    std::vector<std::vector<int>> components;

    int num_components() const { return static_cast<int>(components.size()); }
};

SccDecomposition strongly_connected_components(const DependencyDigraph& g);

/// All simple (elementary) cycles, each rotated to start at its smallest
/// vertex and the list sorted by length then lexicographically. Throws
/// CycleCapError when more than `cap` cycles exist.
std::vector<std::vector<int>> enumerate_simple_cycles(const DependencyDigraph& g,
                                                      long cap = 100000);

/// When the graph is acyclic: an execution order that always moves an
/// object whose goal is unobstructed next (residual out-degree zero, lowest
/// vertex first). Returns nullopt on a cyclic graph.
std::optional<std::vector<int>> movable_order(const DependencyDigraph& g);

/// Adjacency-list text: line v: "v: s1 s2 ..." (successors ascending).
std::string to_adjacency_text(const DependencyDigraph& g);

/// One "i j" line per arc, in sorted arc order.
std::string to_edge_list_text(const DependencyDigraph& g);

}  // namespace tabletop

#endif
