#include "tabletop/fvs.hpp"

#include <algorithm>
#include <stdexcept>

#include "tabletop/util.hpp"

namespace tabletop {

FeedbackVertexSet make_feedback_vertex_set(const DependencyDigraph& g,
                                           std::vector<int> vertices,
                                           bool certified_optimal) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    if (!g.without(vertices).acyclic()) {
        throw std::logic_error("feedback vertex set leaves a cycle");
    }
    FeedbackVertexSet out;
    out.vertices = std::move(vertices);
    out.certified_optimal = certified_optimal;
    return out;
}

namespace {

/// Components of size one cannot host a cycle (self loops are rejected at
/// graph construction), so every method works on the nontrivial components
/// and unions the answers.
std::vector<std::vector<int>> nontrivial_components(const DependencyDigraph& g) {
    std::vector<std::vector<int>> out;
    for (auto& comp : strongly_connected_components(g).components) {
        if (comp.size() > 1) out.push_back(comp);
    }
    // Process components in ascending-vertex order for reproducible output.
    std::sort(out.begin(), out.end());
    return out;
}

template <typename SolveComponent>
FeedbackVertexSet per_component(const DependencyDigraph& g, SolveComponent solve) {
    std::vector<int> verts;
    bool certified = true;
    for (const std::vector<int>& comp : nontrivial_components(g)) {
        DependencyDigraph sub = g.induced(comp);
        std::pair<std::vector<int>, bool> local = solve(sub);
        for (int v : local.first) verts.push_back(comp[static_cast<size_t>(v)]);
        certified = certified && local.second;
    }
    return make_feedback_vertex_set(g, std::move(verts), certified);
}

bool next_combination(std::vector<int>& c, int n) {
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] < n - (k - i)) {
            ++c[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

FeedbackVertexSet fvs_brute_force(const DependencyDigraph& g) {
    if (g.n > 20) throw SizeLimitError("fvs_brute_force handles at most 20 vertices");
    if (g.acyclic()) return make_feedback_vertex_set(g, {}, true);
    for (int k = 1; k <= g.n; ++k) {
        std::vector<int> comb(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) comb[static_cast<size_t>(i)] = i;
        do {
            if (g.without(comb).acyclic()) return make_feedback_vertex_set(g, comb, true);
        } while (next_combination(comb, g.n));
    }
    throw std::logic_error("unreachable: removing all vertices is always acyclic");
}

namespace {

/// Linear-ordering program for one strongly connected component with k
/// vertices. The component graph is split: vertex t becomes t_in (node 2t)
/// and t_out (node 2t+1) joined by an internal arc, and each dependency arc
/// (t, u) becomes (t_out, u_in). Order the 2k nodes; an internal arc going
/// backward costs 1 (vertex t joins the set), and a backward dependency arc
/// is charged to its head's internal arc, which every cycle through the arc
/// also crosses. Minimizing backward weight therefore minimizes the
/// feedback vertex set.
struct OrderingModel {
    IlpModel ilp;
    int nodes = 0;
    std::vector<int> y;  // y[i*nodes+j] for i<j: 1 iff j precedes i

    int y_var(int i, int j) const { return y[static_cast<size_t>(i) * static_cast<size_t>(nodes) + static_cast<size_t>(j)]; }
};

OrderingModel build_ordering_model(const DependencyDigraph& sub) {
    OrderingModel m;
    m.nodes = 2 * sub.n;
    m.y.assign(static_cast<size_t>(m.nodes) * static_cast<size_t>(m.nodes), -1);
    for (int i = 0; i < m.nodes; ++i) {
        for (int j = i + 1; j < m.nodes; ++j) {
            int v = m.ilp.add_var("y_" + std::to_string(i) + "_" + std::to_string(j));
            m.y[static_cast<size_t>(i) * static_cast<size_t>(m.nodes) + static_cast<size_t>(j)] = v;
        }
    }

    // Backward indicator for arc (a, b): y_ab when a < b, 1 - y_ba when
    // a > b (y_ba = 0 says b precedes a, i.e. the arc goes backward).
    auto add_arc_cost = [&m](int a, int b) {
        if (a < b) {
            m.ilp.set_objective_coef(m.y_var(a, b), 1.0);
        } else {
            m.ilp.objective_constant += 1.0;
            m.ilp.set_objective_coef(m.y_var(b, a), -1.0);
        }
    };
    for (int t = 0; t < sub.n; ++t) add_arc_cost(2 * t, 2 * t + 1);
    for (auto [t, u] : sub.arcs) add_arc_cost(2 * t + 1, 2 * u);

    // Transitivity on ordered triples keeps the y variables a total order.
    for (int i = 0; i < m.nodes; ++i) {
        for (int j = i + 1; j < m.nodes; ++j) {
            for (int k = j + 1; k < m.nodes; ++k) {
                int yij = m.y_var(i, j), yjk = m.y_var(j, k), yik = m.y_var(i, k);
                m.ilp.add_constraint({{yij, 1.0}, {yjk, 1.0}, {yik, -1.0}}, Relation::LessEq, 1.0);
                m.ilp.add_constraint({{yij, -1.0}, {yjk, -1.0}, {yik, 1.0}}, Relation::LessEq, 0.0);
            }
        }
    }
    return m;
}

std::pair<std::vector<int>, bool> ordering_component_fvs(const DependencyDigraph& sub,
                                                         const IlpEngine& engine) {
    OrderingModel m = build_ordering_model(sub);
    IlpSolution sol = engine.solve(m.ilp);
    if (sol.assignment.empty()) {
        throw std::runtime_error("ordering model unsolved within budget");
    }

    auto precedes = [&](int a, int b) {
        if (a < b) return sol.assignment[static_cast<size_t>(m.y_var(a, b))] == 0;
        return sol.assignment[static_cast<size_t>(m.y_var(b, a))] == 1;
    };
    std::vector<int> rank(static_cast<size_t>(m.nodes), 0);
    for (int a = 0; a < m.nodes; ++a) {
        for (int b = 0; b < m.nodes; ++b) {
            if (a != b && precedes(b, a)) ++rank[static_cast<size_t>(a)];
        }
    }

    std::vector<int> verts;
    auto backward = [&rank](int a, int b) { return rank[static_cast<size_t>(a)] > rank[static_cast<size_t>(b)]; };
    for (int t = 0; t < sub.n; ++t) {
        if (backward(2 * t, 2 * t + 1)) verts.push_back(t);
    }
    for (auto [t, u] : sub.arcs) {
        if (backward(2 * t + 1, 2 * u)) verts.push_back(u);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return {verts, sol.status == SolveStatus::Optimal};
}

/// Cycle-covering program: binary v_i = 1 keeps vertex i, and every simple
/// cycle must drop at least one vertex.
IlpModel build_cycle_cover_model(const DependencyDigraph& sub,
                                 const std::vector<std::vector<int>>& cycles) {
    IlpModel ilp;
    for (int i = 0; i < sub.n; ++i) {
        int v = ilp.add_var("v" + std::to_string(i));
        ilp.set_objective_coef(v, 1.0);
    }
    ilp.sense = Sense::Maximize;
    for (const std::vector<int>& cyc : cycles) {
        std::vector<LinearTerm> terms;
        for (int v : cyc) terms.push_back({v, 1.0});
        ilp.add_constraint(std::move(terms), Relation::LessEq,
                           static_cast<double>(cyc.size()) - 1.0);
    }
    return ilp;
}

std::vector<int> dropped_vertices(const std::vector<std::uint8_t>& assignment) {
    std::vector<int> out;
    for (size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == 0) out.push_back(static_cast<int>(i));
    }
    return out;
}

}  // namespace

FeedbackVertexSet fvs_ilp_constraint(const DependencyDigraph& g, const IlpEngine& engine) {
    return per_component(g, [&engine](const DependencyDigraph& sub) {
        return ordering_component_fvs(sub, engine);
    });
}

FeedbackVertexSet fvs_ilp_enumerate(const DependencyDigraph& g, const IlpEngine& engine,
                                    long cycle_cap) {
    return per_component(g, [&engine, cycle_cap](const DependencyDigraph& sub) {
        std::vector<std::vector<int>> cycles = enumerate_simple_cycles(sub, cycle_cap);
        IlpModel ilp = build_cycle_cover_model(sub, cycles);
        IlpSolution sol = engine.solve(ilp);
        if (sol.assignment.empty()) throw std::runtime_error("cycle cover model unsolved within budget");
        return std::make_pair(dropped_vertices(sol.assignment), sol.status == SolveStatus::Optimal);
    });
}

FeedbackVertexSet fvs_msch(const DependencyDigraph& g, long cycle_cap) {
    return per_component(g, [cycle_cap](const DependencyDigraph& sub) {
        std::vector<std::vector<int>> cycles = enumerate_simple_cycles(sub, cycle_cap);
        std::vector<bool> broken(cycles.size(), false);
        std::vector<int> verts;
        for (;;) {
            std::vector<long> live(static_cast<size_t>(sub.n), 0);
            long remaining = 0;
            for (size_t c = 0; c < cycles.size(); ++c) {
                if (broken[c]) continue;
                ++remaining;
                for (int v : cycles[c]) ++live[static_cast<size_t>(v)];
            }
            if (remaining == 0) break;
            int pick = 0;
            for (int v = 1; v < sub.n; ++v) {
                if (live[static_cast<size_t>(v)] > live[static_cast<size_t>(pick)]) pick = v;
            }
            verts.push_back(pick);
            for (size_t c = 0; c < cycles.size(); ++c) {
                if (broken[c]) continue;
                for (int v : cycles[c]) {
                    if (v == pick) {
                        broken[c] = true;
                        break;
                    }
                }
            }
        }
        return std::make_pair(verts, false);
    });
}

namespace {

/// Count cycles through v by repeated shortest-cycle search: each found
/// cycle must leave v through a not-yet-marked outgoing arc, which then
/// gets marked. Breadth-first keeps the found cycle shortest; successors in
/// ascending order keep ties deterministic.
long mark_count(const DependencyDigraph& g, const std::vector<bool>& alive, int v) {
    std::vector<bool> marked(g.out_adj[static_cast<size_t>(v)].size(), false);
    long count = 0;
    for (;;) {
        // BFS from every unmarked successor simultaneously, remembering the
        // entry arc; first arrival back at v wins, smallest entry on ties.
        std::vector<int> entry(static_cast<size_t>(g.n), -1);
        std::vector<int> frontier;
        const auto& succ = g.out_adj[static_cast<size_t>(v)];
        for (size_t s = 0; s < succ.size(); ++s) {
            int w = succ[s];
            if (marked[s] || !alive[static_cast<size_t>(w)]) continue;
            if (w == v) continue;  // impossible, no self loops
            if (entry[static_cast<size_t>(w)] < 0) {
                entry[static_cast<size_t>(w)] = static_cast<int>(s);
                frontier.push_back(w);
            }
        }
        int found_entry = -1;
        while (!frontier.empty() && found_entry < 0) {
            std::vector<int> next;
            for (int u : frontier) {
                for (int w : g.out_adj[static_cast<size_t>(u)]) {
                    if (w == v) {
                        int e = entry[static_cast<size_t>(u)];
                        if (found_entry < 0 || e < found_entry) found_entry = e;
                        continue;
                    }
                    if (!alive[static_cast<size_t>(w)]) continue;
                    if (entry[static_cast<size_t>(w)] < 0) {
                        entry[static_cast<size_t>(w)] = entry[static_cast<size_t>(u)];
                        next.push_back(w);
                    }
                }
            }
            frontier = std::move(next);
        }
        if (found_entry < 0) return count;
        marked[static_cast<size_t>(found_entry)] = true;
        ++count;
    }
}

bool residual_acyclic(const DependencyDigraph& g, const std::vector<bool>& alive) {
    std::vector<int> removed;
    for (int v = 0; v < g.n; ++v) {
        if (!alive[static_cast<size_t>(v)]) removed.push_back(v);
    }
    return g.without(removed).acyclic();
}

}  // namespace

FeedbackVertexSet fvs_mch(const DependencyDigraph& g) {
    return per_component(g, [](const DependencyDigraph& sub) {
        std::vector<bool> alive(static_cast<size_t>(sub.n), true);
        std::vector<int> verts;
        while (!residual_acyclic(sub, alive)) {
            long best = -1;
            int pick = -1;
            for (int v = 0; v < sub.n; ++v) {
                if (!alive[static_cast<size_t>(v)]) continue;
                long c = mark_count(sub, alive, v);
                if (c > best) {
                    best = c;
                    pick = v;
                }
            }
            alive[static_cast<size_t>(pick)] = false;
            verts.push_back(pick);
        }
        std::sort(verts.begin(), verts.end());
        return std::make_pair(verts, false);
    });
}

FeedbackVertexSet fvs_mdh(const DependencyDigraph& g) {
    return per_component(g, [](const DependencyDigraph& sub) {
        std::vector<int> removed;
        std::vector<int> verts;
        for (;;) {
            DependencyDigraph res = sub.without(removed);
            // A vertex lies on some cycle exactly when its residual
            // strongly connected component has at least two vertices.
            SccDecomposition scc = strongly_connected_components(res);
            std::vector<int> comp_size(static_cast<size_t>(scc.num_components()), 0);
            for (int v = 0; v < res.n; ++v) ++comp_size[static_cast<size_t>(scc.component_of[static_cast<size_t>(v)])];
            int pick = -1;
            long best = -1;
            for (int v = 0; v < res.n; ++v) {
                bool gone = false;
                for (int r : removed) gone = gone || r == v;
                if (gone) continue;
                if (comp_size[static_cast<size_t>(scc.component_of[static_cast<size_t>(v)])] < 2) continue;
                long deg = static_cast<long>(res.out_adj[static_cast<size_t>(v)].size() +
                                             res.in_adj[static_cast<size_t>(v)].size());
                if (deg > best) {
                    best = deg;
                    pick = v;
                }
            }
            if (pick < 0) break;
            removed.push_back(pick);
            verts.push_back(pick);
        }
        std::sort(verts.begin(), verts.end());
        return std::make_pair(verts, false);
    });
}

std::vector<FeedbackVertexSet> enumerate_optimal_fvs(const DependencyDigraph& g,
                                                     const IlpEngine& engine, long cycle_cap,
                                                     int max_sets, bool* truncated) {
    if (truncated != nullptr) *truncated = false;

    // Optimum patterns per nontrivial component, then the cartesian
    // product: components are vertex-disjoint, so minimum sets combine
    // freely.
    std::vector<std::vector<std::vector<int>>> per_comp;
    for (const std::vector<int>& comp : nontrivial_components(g)) {
        DependencyDigraph sub = g.induced(comp);
        std::vector<std::vector<int>> cycles = enumerate_simple_cycles(sub, cycle_cap);
        IlpModel ilp = build_cycle_cover_model(sub, cycles);
        bool local_trunc = false;
        std::vector<IlpSolution> optima =
            engine.solve_all_optima(ilp, {}, std::nullopt, max_sets, &local_trunc);
        if (optima.empty()) throw std::runtime_error("cycle cover model unsolved within budget");
        if (local_trunc && truncated != nullptr) *truncated = true;

        std::vector<std::vector<int>> sets;
        for (const IlpSolution& sol : optima) {
            std::vector<int> verts;
            for (int local : dropped_vertices(sol.assignment)) {
                verts.push_back(comp[static_cast<size_t>(local)]);
            }
            sets.push_back(std::move(verts));
        }
        per_comp.push_back(std::move(sets));
    }

    std::vector<FeedbackVertexSet> out;
    std::vector<size_t> choice(per_comp.size(), 0);
    for (;;) {
        std::vector<int> verts;
        for (size_t c = 0; c < per_comp.size(); ++c) {
            const std::vector<int>& part = per_comp[c][choice[c]];
            verts.insert(verts.end(), part.begin(), part.end());
        }
        out.push_back(make_feedback_vertex_set(g, std::move(verts), true));
        if (static_cast<int>(out.size()) >= max_sets) {
            // More combinations may remain.
            size_t c = 0;
            for (; c < per_comp.size(); ++c) {
                if (choice[c] + 1 < per_comp[c].size()) break;
            }
            if (c < per_comp.size() && truncated != nullptr) *truncated = true;
            break;
        }
        size_t c = 0;
        for (; c < per_comp.size(); ++c) {
            if (++choice[c] < per_comp[c].size()) break;
            choice[c] = 0;
        }
        if (c == per_comp.size()) break;
    }
    std::sort(out.begin(), out.end(), [](const FeedbackVertexSet& a, const FeedbackVertexSet& b) {
        return a.vertices < b.vertices;
    });
    return out;
}

}  // namespace tabletop
