#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tabletop/depgraph.hpp"
#include "tabletop/instance.hpp"
#include "tabletop/util.hpp"

using namespace tabletop;

namespace {

DependencyDigraph random_digraph(int n, double avg_degree, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> arcs;
    int target = static_cast<int>(n * avg_degree / 2.0);
    int guard = 0;
    while (static_cast<int>(arcs.size()) < target && ++guard < 100 * target + 100) {
        int a = rng.below(n);
        int b = rng.below(n);
        if (a == b) continue;
        if (std::find(arcs.begin(), arcs.end(), std::make_pair(a, b)) != arcs.end()) continue;
        arcs.emplace_back(a, b);
    }
    return DependencyDigraph::from_arcs(n, arcs);
}

}  // namespace

TEST_SUITE("depgraph") {

TEST_CASE("from_arcs sorts, deduplicates, and rejects bad input") {
    DependencyDigraph g = DependencyDigraph::from_arcs(3, {{2, 0}, {0, 1}, {2, 0}});
    CHECK(g.num_arcs() == 2);
    CHECK(g.arcs[0] == std::make_pair(0, 1));
    CHECK(g.arcs[1] == std::make_pair(2, 0));
    CHECK(g.has_arc(2, 0));
    CHECK_FALSE(g.has_arc(0, 2));

    CHECK_THROWS_AS(DependencyDigraph::from_arcs(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(DependencyDigraph::from_arcs(2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("arc direction: goal of i over start of j yields (i, j)") {
    Instance inst;
    inst.workspace = {-5, -5, 5, 5};
    inst.rest_start = {0, -4};
    inst.rest_goal = {0, -4};
    inst.objects = {
        {0, 0.5, {-2, 0}, {1.9, 0}},  // goal sits on object 1's start
        {1, 0.5, {2.5, 0}, {0, 2}},
    };
    DependencyDigraph dep = build_dependency_graph(inst);
    CHECK(dep.num_arcs() == 1);
    CHECK(dep.has_arc(0, 1));
    CHECK_FALSE(dep.has_arc(1, 0));
}

TEST_CASE("disjoint instances give an empty dependency graph") {
    Instance inst = generate_no_overlap(9, 4);
    DependencyDigraph dep = build_dependency_graph(inst);
    CHECK(dep.num_arcs() == 0);
    CHECK(dep.acyclic());
}

TEST_CASE("the swap fixture is the two-cycle") {
    DependencyDigraph dep = build_dependency_graph(oracle::swap_instance());
    CHECK(dep.n == 2);
    CHECK(dep.num_arcs() == 2);
    CHECK(dep.has_arc(0, 1));
    CHECK(dep.has_arc(1, 0));
    CHECK_FALSE(dep.acyclic());
}

TEST_CASE("an object whose goal equals its start produces no self loop") {
    Instance inst;
    inst.workspace = {-5, -5, 5, 5};
    inst.rest_start = {0, -4};
    inst.rest_goal = {0, -4};
    inst.objects = {{0, 0.5, {1, 1}, {1, 1}}, {1, 0.5, {3, 3}, {-3, -3}}};
    DependencyDigraph dep = build_dependency_graph(inst);
    CHECK(dep.num_arcs() == 0);
}

TEST_CASE("strongly connected components come in reverse topological order") {
    // 0 -> 1 <-> 2, 3 -> 0, isolated 4.
    DependencyDigraph g = DependencyDigraph::from_arcs(5, {{0, 1}, {1, 2}, {2, 1}, {3, 0}});
    SccDecomposition scc = strongly_connected_components(g);
    CHECK(scc.num_components() == 4);
    for (int v = 0; v < 5; ++v) {
        const auto& comp = scc.components[scc.component_of[v]];
        CHECK(std::find(comp.begin(), comp.end(), v) != comp.end());
    }
    // {1,2} listed ascending.
    const auto& pair_comp = scc.components[scc.component_of[1]];
    CHECK(pair_comp == std::vector<int>{1, 2});
    // Every arc points from a later component to an earlier one (or stays inside).
    for (const auto& [a, b] : g.arcs) {
        CHECK(scc.component_of[a] >= scc.component_of[b]);
    }
}

TEST_CASE("simple cycle enumeration matches the exhaustive reference") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        int n = 3 + static_cast<int>(seed % 4u);
        DependencyDigraph g = random_digraph(n, 2.5, seed);
        auto got = enumerate_simple_cycles(g);
        auto want = oracle::all_simple_cycles(n, g.arcs);
        CHECK(got == want);
    }
}

TEST_CASE("cycle enumeration respects its cap") {
    // Complete digraph on 6 vertices has hundreds of simple cycles.
    std::vector<std::pair<int, int>> arcs;
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            if (a != b) arcs.emplace_back(a, b);
        }
    }
    DependencyDigraph g = DependencyDigraph::from_arcs(6, arcs);
    CHECK_THROWS_AS(enumerate_simple_cycles(g, 10), CycleCapError);
    CHECK(enumerate_simple_cycles(g, 100000).size() == 409);
}

TEST_CASE("movable order clears unobstructed goals first") {
    DependencyDigraph chain = build_dependency_graph(oracle::chain_instance());
    CHECK(chain.num_arcs() == 2);
    auto order = movable_order(chain);
    REQUIRE(order.has_value());
    CHECK(*order == std::vector<int>{2, 1, 0});

    DependencyDigraph cyc = DependencyDigraph::from_arcs(2, {{0, 1}, {1, 0}});
    CHECK_FALSE(movable_order(cyc).has_value());
}

TEST_CASE("movable order only ever moves objects with resolved out-arcs") {
    for (std::uint64_t seed = 50; seed < 70; ++seed) {
        int n = 6;
        DependencyDigraph g = random_digraph(n, 1.0, seed);
        auto order = movable_order(g);
        if (!order.has_value()) {
            CHECK_FALSE(g.acyclic());
            continue;
        }
        std::set<int> done;
        for (int v : *order) {
            for (int w : g.out_adj[v]) {
                CHECK(done.count(w) == 1);  // dependency resolved before v moves
            }
            done.insert(v);
        }
        CHECK(static_cast<int>(done.size()) == n);
    }
}

TEST_CASE("induced relabels, without keeps labels") {
    DependencyDigraph g = DependencyDigraph::from_arcs(4, {{0, 2}, {2, 3}, {3, 0}});
    DependencyDigraph sub = g.induced({0, 2, 3});
    CHECK(sub.n == 3);
    CHECK(sub.has_arc(0, 1));  // old (0,2)
    CHECK(sub.has_arc(1, 2));  // old (2,3)
    CHECK(sub.has_arc(2, 0));  // old (3,0)

    DependencyDigraph res = g.without({2});
    CHECK(res.n == 4);
    CHECK(res.num_arcs() == 1);
    CHECK(res.has_arc(3, 0));
    CHECK(res.acyclic());
}

TEST_CASE("dependency graph is invariant under object relabeling") {
    Instance inst = generate_with_overlap(7, 2.0, 4, 23);
    DependencyDigraph dep = build_dependency_graph(inst);

    // Reverse the object list (ids move with their geometry).
    Instance rev = inst;
    std::reverse(rev.objects.begin(), rev.objects.end());
    DependencyDigraph dep_rev = build_dependency_graph(rev);

    // Arc (i, j) on the reversed instance corresponds to (n-1-i, n-1-j).
    std::set<std::pair<int, int>> remapped;
    int n = inst.num_objects();
    for (const auto& [a, b] : dep_rev.arcs) remapped.insert({n - 1 - a, n - 1 - b});
    std::set<std::pair<int, int>> original(dep.arcs.begin(), dep.arcs.end());
    CHECK(remapped == original);
}

TEST_CASE("text exports list every arc") {
    DependencyDigraph g = DependencyDigraph::from_arcs(3, {{0, 1}, {2, 0}});
    CHECK(to_edge_list_text(g) == "0 1\n2 0\n");
    CHECK(to_adjacency_text(g) == "0: 1\n1:\n2: 0\n");
}

}  // TEST_SUITE
