#include "tabletop/depgraph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "tabletop/util.hpp"

namespace tabletop {

DependencyDigraph DependencyDigraph::from_arcs(int n, std::vector<std::pair<int, int>> arcs) {
    if (n < 0) throw std::invalid_argument("dependency graph: negative vertex count");
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    DependencyDigraph g;
    g.n = n;
    g.out_adj.assign(static_cast<size_t>(n), {});
    g.in_adj.assign(static_cast<size_t>(n), {});
    for (auto [i, j] : arcs) {
        if (i < 0 || i >= n || j < 0 || j >= n) {
            throw std::invalid_argument("dependency graph: arc endpoint out of range");
        }
        if (i == j) throw std::invalid_argument("dependency graph: self loop on vertex " + std::to_string(i));
        g.out_adj[static_cast<size_t>(i)].push_back(j);
        g.in_adj[static_cast<size_t>(j)].push_back(i);
    }
    g.arcs = std::move(arcs);
    return g;
}

bool DependencyDigraph::has_arc(int i, int j) const {
    const auto& row = out_adj[static_cast<size_t>(i)];
    return std::binary_search(row.begin(), row.end(), j);
}

DependencyDigraph DependencyDigraph::induced(const std::vector<int>& verts) const {
    std::vector<int> label(static_cast<size_t>(n), -1);
    for (size_t k = 0; k < verts.size(); ++k) label[static_cast<size_t>(verts[k])] = static_cast<int>(k);
    std::vector<std::pair<int, int>> sub;
    for (auto [i, j] : arcs) {
        int a = label[static_cast<size_t>(i)], b = label[static_cast<size_t>(j)];
        if (a >= 0 && b >= 0) sub.emplace_back(a, b);
    }
    return from_arcs(static_cast<int>(verts.size()), std::move(sub));
}

DependencyDigraph DependencyDigraph::without(const std::vector<int>& removed) const {
    std::vector<bool> gone(static_cast<size_t>(n), false);
    for (int v : removed) gone[static_cast<size_t>(v)] = true;
    std::vector<std::pair<int, int>> kept;
    for (auto [i, j] : arcs) {
        if (!gone[static_cast<size_t>(i)] && !gone[static_cast<size_t>(j)]) kept.emplace_back(i, j);
    }
    return from_arcs(n, std::move(kept));
}

bool DependencyDigraph::acyclic() const {
    for (const auto& comp : strongly_connected_components(*this).components) {
        if (comp.size() > 1) return false;
    }
    return true;
}

DependencyDigraph build_dependency_graph(const Instance& inst) {
    const int n = inst.num_objects();
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const ObjectSpec& a = inst.objects[static_cast<size_t>(i)];
            const ObjectSpec& b = inst.objects[static_cast<size_t>(j)];
            if (discs_overlap(a.goal, a.radius, b.start, b.radius)) arcs.emplace_back(i, j);
        }
    }
    return DependencyDigraph::from_arcs(n, std::move(arcs));
}

namespace {

// Iterative Tarjan; recursion depth would be a liability on long chains.
struct TarjanState {
    const DependencyDigraph& g;
    std::vector<int> index, lowlink, comp;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int counter = 0;
    int ncomp = 0;

    explicit TarjanState(const DependencyDigraph& g_)
        : g(g_),
          index(static_cast<size_t>(g_.n), -1),
          lowlink(static_cast<size_t>(g_.n), 0),
          comp(static_cast<size_t>(g_.n), -1),
          on_stack(static_cast<size_t>(g_.n), false) {}

    void run(int root) {
        struct Frame {
            int v;
            size_t next_child;
        };
        std::vector<Frame> frames{{root, 0}};
        index[static_cast<size_t>(root)] = lowlink[static_cast<size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<size_t>(root)] = true;

        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& succ = g.out_adj[static_cast<size_t>(f.v)];
            if (f.next_child < succ.size()) {
                int w = succ[f.next_child++];
                if (index[static_cast<size_t>(w)] < 0) {
                    index[static_cast<size_t>(w)] = lowlink[static_cast<size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<size_t>(w)] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<size_t>(w)]) {
                    lowlink[static_cast<size_t>(f.v)] =
                        std::min(lowlink[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
                }
            } else {
                if (lowlink[static_cast<size_t>(f.v)] == index[static_cast<size_t>(f.v)]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<size_t>(w)] = false;
                        comp[static_cast<size_t>(w)] = ncomp;
                        if (w == f.v) break;
                    }
                    ++ncomp;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    int p = frames.back().v;
                    lowlink[static_cast<size_t>(p)] =
                        std::min(lowlink[static_cast<size_t>(p)], lowlink[static_cast<size_t>(v)]);
                }
            }
        }
    }
};

}  // namespace

SccDecomposition strongly_connected_components(const DependencyDigraph& g) {
    TarjanState t(g);
    for (int v = 0; v < g.n; ++v) {
        if (t.index[static_cast<size_t>(v)] < 0) t.run(v);
    }
    SccDecomposition out;
    out.component_of = t.comp;
    out.components.assign(static_cast<size_t>(t.ncomp), {});
    for (int v = 0; v < g.n; ++v) {
        out.components[static_cast<size_t>(t.comp[static_cast<size_t>(v)])].push_back(v);
    }
    // Tarjan emits components in reverse topological order already;
    // vertices joined them in pop order, so restore ascending ids.
    for (auto& c : out.components) std::sort(c.begin(), c.end());
    return out;
}

namespace {

// Johnson-style elementary cycle search within one strongly connected
// subgraph, vertices visited in ascending order from each root.
struct CycleSearch {
    const DependencyDigraph& g;
    long cap;
    std::vector<std::vector<int>>& out;

    std::vector<bool> blocked;
    std::vector<std::vector<int>> block_list;
    std::vector<int> path;
    int root = 0;

    CycleSearch(const DependencyDigraph& g_, long cap_, std::vector<std::vector<int>>& out_)
        : g(g_), cap(cap_), out(out_),
          blocked(static_cast<size_t>(g_.n), false),
          block_list(static_cast<size_t>(g_.n)) {}

    void unblock(int v) {
        blocked[static_cast<size_t>(v)] = false;
        for (int w : block_list[static_cast<size_t>(v)]) {
            if (blocked[static_cast<size_t>(w)]) unblock(w);
        }
        block_list[static_cast<size_t>(v)].clear();
    }

    bool circuit(int v) {
        bool found = false;
        path.push_back(v);
        blocked[static_cast<size_t>(v)] = true;
        for (int w : g.out_adj[static_cast<size_t>(v)]) {
            if (w < root) continue;  // cycles through smaller roots already emitted
            if (w == root) {
                if (static_cast<long>(out.size()) >= cap) {
                    throw CycleCapError("simple cycle cap exceeded");
                }
                out.push_back(path);
                found = true;
            } else if (!blocked[static_cast<size_t>(w)]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : g.out_adj[static_cast<size_t>(v)]) {
                if (w < root) continue;
                auto& bl = block_list[static_cast<size_t>(w)];
                if (std::find(bl.begin(), bl.end(), v) == bl.end()) bl.push_back(v);
            }
        }
        path.pop_back();
        return found;
    }
};

}  // namespace

std::vector<std::vector<int>> enumerate_simple_cycles(const DependencyDigraph& g, long cap) {
    std::vector<std::vector<int>> cycles;
    CycleSearch cs(g, cap, cycles);
    for (int root = 0; root < g.n; ++root) {
        cs.root = root;
        std::fill(cs.blocked.begin(), cs.blocked.end(), false);
        for (auto& bl : cs.block_list) bl.clear();
        cs.circuit(root);
    }
    // Roots ascend, so each cycle already starts at its smallest vertex.
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return cycles;
}

std::optional<std::vector<int>> movable_order(const DependencyDigraph& g) {
    // Repeatedly move the lowest vertex whose goal is unobstructed, i.e.
    // residual out-degree zero. A vertex's arcs vanish once it is placed.
    std::vector<int> live_out(static_cast<size_t>(g.n), 0);
    for (int v = 0; v < g.n; ++v) {
        live_out[static_cast<size_t>(v)] = static_cast<int>(g.out_adj[static_cast<size_t>(v)].size());
    }
    std::vector<bool> done(static_cast<size_t>(g.n), false);
    std::vector<int> order;
    for (int step = 0; step < g.n; ++step) {
        int pick = -1;
        for (int v = 0; v < g.n; ++v) {
            if (!done[static_cast<size_t>(v)] && live_out[static_cast<size_t>(v)] == 0) {
                pick = v;
                break;
            }
        }
        if (pick < 0) return std::nullopt;
        done[static_cast<size_t>(pick)] = true;
        order.push_back(pick);
        for (int p : g.in_adj[static_cast<size_t>(pick)]) {
            if (!done[static_cast<size_t>(p)]) --live_out[static_cast<size_t>(p)];
        }
    }
    return order;
}

std::string to_adjacency_text(const DependencyDigraph& g) {
    std::ostringstream os;
    for (int v = 0; v < g.n; ++v) {
        os << v << ":";
        for (int w : g.out_adj[static_cast<size_t>(v)]) os << ' ' << w;
        os << '\n';
    }
    return os.str();
}

std::string to_edge_list_text(const DependencyDigraph& g) {
    std::ostringstream os;
    for (auto [i, j] : g.arcs) os << i << ' ' << j << '\n';
    return os.str();
}

}  // namespace tabletop
