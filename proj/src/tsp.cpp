#include "tabletop/tsp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tabletop/util.hpp"

namespace tabletop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GraphBuilder {
    TourGraph g;
    std::vector<std::pair<std::pair<int, int>, double>> finite_edges;

    explicit GraphBuilder(bool labeled) { g.labeled = labeled; }

    int add(TourVertexKind kind, int object) {
        g.vertices.push_back({kind, object});
        return g.size() - 1;
    }

    void edge(int a, int b, double w) { finite_edges.push_back({{a, b}, w}); }

    TourGraph finish() {
        double total = 0.0;
        for (const auto& e : finite_edges) total += e.second;
        g.big_m = 1.0 + total;
        size_t nv = static_cast<size_t>(g.size());
        g.weights.assign(nv * nv, g.big_m);
        for (const auto& e : finite_edges) {
            auto [a, b] = e.first;
            g.weights[static_cast<size_t>(a) * nv + static_cast<size_t>(b)] = e.second;
            g.weights[static_cast<size_t>(b) * nv + static_cast<size_t>(a)] = e.second;
        }
        return std::move(g);
    }
};

void check_tour_input(const Instance& inst, bool want_labeled) {
    if (inst.labeled != want_labeled) {
        throw std::invalid_argument(want_labeled ? "tour graph: instance must be labeled"
                                                 : "tour graph: instance must be unlabeled");
    }
    for (const ObjectSpec& a : inst.objects) {
        for (const ObjectSpec& b : inst.objects) {
            if (discs_overlap(a.goal, a.radius, b.start, b.radius)) {
                throw std::invalid_argument("tour graph: goal of object " + std::to_string(a.id) +
                                            " overlaps start of object " + std::to_string(b.id));
            }
        }
    }
}

}  // namespace

TourGraph build_labeled_tour_graph(const Instance& inst) {
    check_tour_input(inst, true);
    const int n = inst.num_objects();
    GraphBuilder b(true);
    b.g.rest_start = b.add(TourVertexKind::RestStart, -1);
    b.g.rest_mid = b.add(TourVertexKind::RestMid, -1);
    b.g.rest_goal = b.add(TourVertexKind::RestGoal, -1);
    for (int i = 0; i < n; ++i) {
        b.g.start_of.push_back(b.add(TourVertexKind::Start, i));
        b.g.mid_of.push_back(b.add(TourVertexKind::Mid, i));
        b.g.goal_of.push_back(b.add(TourVertexKind::Goal, i));
    }

    b.edge(b.g.rest_start, b.g.rest_mid, 0.0);
    b.edge(b.g.rest_mid, b.g.rest_goal, 0.0);
    for (int i = 0; i < n; ++i) {
        const ObjectSpec& oi = inst.objects[static_cast<size_t>(i)];
        b.edge(b.g.rest_start, b.g.start_of[static_cast<size_t>(i)], dist(inst.rest_start, oi.start));
        b.edge(b.g.rest_goal, b.g.goal_of[static_cast<size_t>(i)], dist(inst.rest_goal, oi.goal));
        // The carry itself is cost-free in the tour graph: every tour pays
        // the same loaded legs, so they are excluded from tour length.
        b.edge(b.g.start_of[static_cast<size_t>(i)], b.g.mid_of[static_cast<size_t>(i)], 0.0);
        b.edge(b.g.mid_of[static_cast<size_t>(i)], b.g.goal_of[static_cast<size_t>(i)], 0.0);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const ObjectSpec& oj = inst.objects[static_cast<size_t>(j)];
            b.edge(b.g.start_of[static_cast<size_t>(i)], b.g.goal_of[static_cast<size_t>(j)],
                   dist(oi.start, oj.goal));
        }
    }
    return b.finish();
}

TourGraph build_unlabeled_tour_graph(const Instance& inst) {
    check_tour_input(inst, false);
    const int n = inst.num_objects();
    GraphBuilder b(false);
    b.g.rest_start = b.add(TourVertexKind::RestStart, -1);
    b.g.rest_mid = b.add(TourVertexKind::RestMid, -1);
    b.g.rest_goal = b.add(TourVertexKind::RestGoal, -1);
    for (int i = 0; i < n; ++i) {
        b.g.start_of.push_back(b.add(TourVertexKind::Start, i));
        b.g.goal_of.push_back(b.add(TourVertexKind::Goal, i));
    }

    b.edge(b.g.rest_start, b.g.rest_mid, 0.0);
    b.edge(b.g.rest_mid, b.g.rest_goal, 0.0);
    for (int i = 0; i < n; ++i) {
        const ObjectSpec& oi = inst.objects[static_cast<size_t>(i)];
        b.edge(b.g.rest_start, b.g.start_of[static_cast<size_t>(i)], dist(inst.rest_start, oi.start));
        b.edge(b.g.rest_goal, b.g.goal_of[static_cast<size_t>(i)], dist(inst.rest_goal, oi.goal));
        // Any object may take any goal, so every start-goal pair is a
        // candidate loaded leg, the own pair included.
        for (int j = 0; j < n; ++j) {
            const ObjectSpec& oj = inst.objects[static_cast<size_t>(j)];
            b.edge(b.g.start_of[static_cast<size_t>(i)], b.g.goal_of[static_cast<size_t>(j)],
                   dist(oi.start, oj.goal));
        }
    }
    return b.finish();
}

ContractedAtsp contract_labeled(const Instance& inst) {
    check_tour_input(inst, true);
    const int n = inst.num_objects();
    ContractedAtsp c;
    c.nodes = n + 1;
    c.cost.assign(static_cast<size_t>(c.nodes) * static_cast<size_t>(c.nodes), kInf);
    auto set = [&c](int i, int j, double v) {
        c.cost[static_cast<size_t>(i) * static_cast<size_t>(c.nodes) + static_cast<size_t>(j)] = v;
    };
    for (int j = 0; j < n; ++j) {
        const ObjectSpec& oj = inst.objects[static_cast<size_t>(j)];
        double carry = dist(oj.start, oj.goal);
        c.loaded_total += carry;
        set(0, j + 1, dist(inst.rest_start, oj.start) + carry);
        set(j + 1, 0, dist(oj.goal, inst.rest_goal));
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            set(i + 1, j + 1, dist(inst.objects[static_cast<size_t>(i)].goal, oj.start) + carry);
        }
    }
    if (n == 0) set(0, 0, 0.0);
    return c;
}

namespace {

/// Empty-travel-only contraction used internally by both tour solvers; its
/// cycle cost equals the tour-graph tour length directly.
struct Atsp {
    int nodes = 0;
    std::vector<double> cost;
    double at(int i, int j) const {
        return cost[static_cast<size_t>(i) * static_cast<size_t>(nodes) + static_cast<size_t>(j)];
    }
};

Atsp empty_travel_contraction(const TourGraph& g) {
    const int n = static_cast<int>(g.start_of.size());
    Atsp a;
    a.nodes = n + 1;
    a.cost.assign(static_cast<size_t>(a.nodes) * static_cast<size_t>(a.nodes), kInf);
    auto set = [&a](int i, int j, double v) {
        a.cost[static_cast<size_t>(i) * static_cast<size_t>(a.nodes) + static_cast<size_t>(j)] = v;
    };
    for (int j = 0; j < n; ++j) {
        set(0, j + 1, g.weight(g.rest_start, g.start_of[static_cast<size_t>(j)]));
        set(j + 1, 0, g.weight(g.rest_goal, g.goal_of[static_cast<size_t>(j)]));
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            // weight(start_j, goal_i) is symmetric, giving goal_i -> start_j.
            set(i + 1, j + 1, g.weight(g.start_of[static_cast<size_t>(j)], g.goal_of[static_cast<size_t>(i)]));
        }
    }
    return a;
}

std::vector<int> held_karp_cycle(const Atsp& a) {
    const int n = a.nodes - 1;
    if (n == 0) return {0};
    const size_t full = size_t{1} << n;
    std::vector<double> dp(full * static_cast<size_t>(n), kInf);
    std::vector<int16_t> parent(full * static_cast<size_t>(n), -1);
    auto idx = [n](size_t mask, int last) { return mask * static_cast<size_t>(n) + static_cast<size_t>(last); };

    for (int j = 0; j < n; ++j) dp[idx(size_t{1} << j, j)] = a.at(0, j + 1);
    for (size_t mask = 1; mask < full; ++mask) {
        for (int last = 0; last < n; ++last) {
            if (!(mask & (size_t{1} << last))) continue;
            double base = dp[idx(mask, last)];
            if (base == kInf) continue;
            for (int nxt = 0; nxt < n; ++nxt) {
                if (mask & (size_t{1} << nxt)) continue;
                double cand = base + a.at(last + 1, nxt + 1);
                size_t nm = mask | (size_t{1} << nxt);
                if (cand < dp[idx(nm, nxt)]) {
                    dp[idx(nm, nxt)] = cand;
                    parent[idx(nm, nxt)] = static_cast<int16_t>(last);
                }
            }
        }
    }

    size_t all = full - 1;
    int best_last = -1;
    double best = kInf;
    for (int last = 0; last < n; ++last) {
        double cand = dp[idx(all, last)] + a.at(last + 1, 0);
        if (cand < best) {
            best = cand;
            best_last = last;
        }
    }

    std::vector<int> rev;
    size_t mask = all;
    int last = best_last;
    while (last >= 0) {
        rev.push_back(last + 1);
        int p = parent[idx(mask, last)];
        mask &= ~(size_t{1} << last);
        last = p;
    }
    std::vector<int> order{0};
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) order.push_back(*it);
    return order;
}

std::vector<int> nearest_neighbor_cycle(const Atsp& a) {
    const int k = a.nodes;
    std::vector<bool> used(static_cast<size_t>(k), false);
    std::vector<int> order{0};
    used[0] = true;
    int cur = 0;
    for (int step = 1; step < k; ++step) {
        int pick = -1;
        double best = kInf;
        for (int j = 1; j < k; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            double c = a.at(cur, j);
            if (c < best) {
                best = c;
                pick = j;
            }
        }
        used[static_cast<size_t>(pick)] = true;
        order.push_back(pick);
        cur = pick;
    }
    return order;
}

/// Directed 2-opt: reversing order[i..j] flips that stretch to its
/// reverse-direction cost. Forward and reverse prefix sums make each
/// candidate O(1); prefixes are rebuilt after every accepted move.
bool two_opt_pass(const Atsp& a, std::vector<int>& order) {
    const int k = static_cast<int>(order.size());
    if (k < 4) return false;
    std::vector<double> fwd(static_cast<size_t>(k), 0.0), rev(static_cast<size_t>(k), 0.0);
    for (int t = 1; t < k; ++t) {
        fwd[static_cast<size_t>(t)] = fwd[static_cast<size_t>(t - 1)] + a.at(order[static_cast<size_t>(t - 1)], order[static_cast<size_t>(t)]);
        rev[static_cast<size_t>(t)] = rev[static_cast<size_t>(t - 1)] + a.at(order[static_cast<size_t>(t)], order[static_cast<size_t>(t - 1)]);
    }

    double best_delta = -1e-9;
    int best_i = -1, best_j = -1;
    for (int i = 1; i < k - 1; ++i) {
        for (int j = i + 1; j < k; ++j) {
            int after = order[static_cast<size_t>((j + 1) % k)];
            double removed = a.at(order[static_cast<size_t>(i - 1)], order[static_cast<size_t>(i)]) +
                             (fwd[static_cast<size_t>(j)] - fwd[static_cast<size_t>(i)]) +
                             a.at(order[static_cast<size_t>(j)], after);
            double added = a.at(order[static_cast<size_t>(i - 1)], order[static_cast<size_t>(j)]) +
                           (rev[static_cast<size_t>(j)] - rev[static_cast<size_t>(i)]) +
                           a.at(order[static_cast<size_t>(i)], after);
            double delta = added - removed;
            if (delta < best_delta) {
                best_delta = delta;
                best_i = i;
                best_j = j;
            }
        }
    }
    if (best_i < 0) return false;
    std::reverse(order.begin() + best_i, order.begin() + best_j + 1);
    return true;
}

/// Directed or-opt: relocate a run of 1..3 nodes elsewhere in the cycle.
bool or_opt_pass(const Atsp& a, std::vector<int>& order) {
    const int k = static_cast<int>(order.size());
    double best_delta = -1e-9;
    int best_i = -1, best_len = 0, best_p = -1;
    for (int len = 1; len <= 3 && len < k - 1; ++len) {
        for (int i = 1; i + len - 1 < k; ++i) {
            int before = order[static_cast<size_t>(i - 1)];
            int first = order[static_cast<size_t>(i)];
            int last = order[static_cast<size_t>(i + len - 1)];
            int after = order[static_cast<size_t>((i + len) % k)];
            double removed_here = a.at(before, first) + a.at(last, after);
            double bridge = a.at(before, after);
            for (int p = 0; p < k; ++p) {
                if (p >= i - 1 && p <= i + len - 1) continue;
                int pa = order[static_cast<size_t>(p)];
                int pb = order[static_cast<size_t>((p + 1) % k)];
                if ((p + 1) % k == i) continue;
                double delta = bridge + a.at(pa, first) + a.at(last, pb) -
                               removed_here - a.at(pa, pb);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_i = i;
                    best_len = len;
                    best_p = p;
                }
            }
        }
    }
    if (best_i < 0) return false;
    std::vector<int> seg(order.begin() + best_i, order.begin() + best_i + best_len);
    order.erase(order.begin() + best_i, order.begin() + best_i + best_len);
    int p = best_p;
    if (p > best_i) p -= best_len;
    order.insert(order.begin() + p + 1, seg.begin(), seg.end());
    return true;
}

std::vector<int> local_search_cycle(const Atsp& a, std::vector<int> order) {
    for (long guard = 0; guard < 100000; ++guard) {
        if (two_opt_pass(a, order)) continue;
        if (or_opt_pass(a, order)) continue;
        break;
    }
    return order;
}

Tour expand_labeled(const TourGraph& g, const std::vector<int>& contracted) {
    Tour t;
    t.order.push_back(g.rest_start);
    for (size_t k = 1; k < contracted.size(); ++k) {
        int obj = contracted[k] - 1;
        t.order.push_back(g.start_of[static_cast<size_t>(obj)]);
        t.order.push_back(g.mid_of[static_cast<size_t>(obj)]);
        t.order.push_back(g.goal_of[static_cast<size_t>(obj)]);
    }
    t.order.push_back(g.rest_goal);
    t.order.push_back(g.rest_mid);
    if (contracted.size() == 1) {
        // Degenerate three-vertex cycle: score it as the forced path
        // rest_start - rest_mid - rest_goal, which costs nothing.
        t.length = 0.0;
        return t;
    }
    for (size_t k = 0; k < t.order.size(); ++k) {
        t.length += g.weight(t.order[k], t.order[(k + 1) % t.order.size()]);
    }
    return t;
}

// --- unlabeled solving ---------------------------------------------------

struct UnlabeledDists {
    int n = 0;
    std::vector<double> sm_s;   // rest_start -> start
    std::vector<double> g_gm;   // goal -> rest_goal
    std::vector<double> gs;     // goal i -> start j (n*n)
    std::vector<double> sg;     // start i -> goal j (n*n)

    double goal_start(int gi, int sj) const { return gs[static_cast<size_t>(gi) * static_cast<size_t>(n) + static_cast<size_t>(sj)]; }
    double start_goal(int si, int gj) const { return sg[static_cast<size_t>(si) * static_cast<size_t>(n) + static_cast<size_t>(gj)]; }
};

UnlabeledDists unlabeled_dists(const TourGraph& g) {
    UnlabeledDists d;
    d.n = static_cast<int>(g.start_of.size());
    d.sm_s.resize(static_cast<size_t>(d.n));
    d.g_gm.resize(static_cast<size_t>(d.n));
    d.gs.resize(static_cast<size_t>(d.n) * static_cast<size_t>(d.n));
    d.sg.resize(static_cast<size_t>(d.n) * static_cast<size_t>(d.n));
    for (int i = 0; i < d.n; ++i) {
        d.sm_s[static_cast<size_t>(i)] = g.weight(g.rest_start, g.start_of[static_cast<size_t>(i)]);
        d.g_gm[static_cast<size_t>(i)] = g.weight(g.goal_of[static_cast<size_t>(i)], g.rest_goal);
        for (int j = 0; j < d.n; ++j) {
            double w = g.weight(g.start_of[static_cast<size_t>(j)], g.goal_of[static_cast<size_t>(i)]);
            d.gs[static_cast<size_t>(i) * static_cast<size_t>(d.n) + static_cast<size_t>(j)] = w;
            d.sg[static_cast<size_t>(j) * static_cast<size_t>(d.n) + static_cast<size_t>(i)] = w;
        }
    }
    return d;
}

/// Alternating interleaving as a vertex sequence s_{a1}, g_{c1}, s_{a2}, ...
struct AlternatingOrder {
    std::vector<int> starts, goals;  // same length n
};

/// Exact dynamic program over (starts used, goals used, last goal). Layers
/// are indexed by combination rank to keep the tables dense.
AlternatingOrder alternating_exact(const UnlabeledDists& d) {
    const int n = d.n;
    const int nbits = 1 << n;

    std::vector<int> popcount(static_cast<size_t>(nbits), 0);
    std::vector<int> rank(static_cast<size_t>(nbits), 0);
    std::vector<std::vector<int>> masks_of(static_cast<size_t>(n + 1));
    for (int m = 1; m < nbits; ++m) popcount[static_cast<size_t>(m)] = popcount[static_cast<size_t>(m >> 1)] + (m & 1);
    for (int m = 0; m < nbits; ++m) {
        int pc = popcount[static_cast<size_t>(m)];
        rank[static_cast<size_t>(m)] = static_cast<int>(masks_of[static_cast<size_t>(pc)].size());
        masks_of[static_cast<size_t>(pc)].push_back(m);
    }

    // dp layer k: [rank(S)][rank(G)][position of last goal in G].
    auto layer_size = [&](int k) {
        size_t c = masks_of[static_cast<size_t>(k)].size();
        return c * c * static_cast<size_t>(k);
    };
    std::vector<std::vector<double>> dp(static_cast<size_t>(n + 1));
    std::vector<std::vector<int32_t>> par(static_cast<size_t>(n + 1));  // packed (a, b_pos)
    for (int k = 1; k <= n; ++k) {
        dp[static_cast<size_t>(k)].assign(layer_size(k), kInf);
        par[static_cast<size_t>(k)].assign(layer_size(k), -1);
    }

    auto slot = [&](int k, int s_mask, int g_mask, int g_pos) {
        size_t c = masks_of[static_cast<size_t>(k)].size();
        return (static_cast<size_t>(rank[static_cast<size_t>(s_mask)]) * c +
                static_cast<size_t>(rank[static_cast<size_t>(g_mask)])) * static_cast<size_t>(k) +
               static_cast<size_t>(g_pos);
    };
    auto bit_pos = [&popcount](int mask, int bit) {
        return popcount[static_cast<size_t>(mask & ((1 << bit) - 1))];
    };

    for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
            double cost = d.sm_s[static_cast<size_t>(a)] + d.start_goal(a, c);
            size_t s = slot(1, 1 << a, 1 << c, 0);
            if (cost < dp[1][s]) {
                dp[1][s] = cost;
                par[1][s] = (a << 8) | 0xFF;  // 0xFF: no previous goal
            }
        }
    }

    for (int k = 1; k < n; ++k) {
        const auto& cur = dp[static_cast<size_t>(k)];
        for (int s_mask : masks_of[static_cast<size_t>(k)]) {
            for (int g_mask : masks_of[static_cast<size_t>(k)]) {
                for (int b = 0, bp = 0; b < n; ++b) {
                    if (!(g_mask & (1 << b))) continue;
                    double base = cur[slot(k, s_mask, g_mask, bp)];
                    int this_bp = bp++;
                    if (base == kInf) continue;
                    for (int a = 0; a < n; ++a) {
                        if (s_mask & (1 << a)) continue;
                        double reach = base + d.goal_start(b, a);
                        int ns = s_mask | (1 << a);
                        for (int c = 0; c < n; ++c) {
                            if (g_mask & (1 << c)) continue;
                            double cost = reach + d.start_goal(a, c);
                            int ng = g_mask | (1 << c);
                            size_t sl = slot(k + 1, ns, ng, bit_pos(ng, c));
                            if (cost < dp[static_cast<size_t>(k + 1)][sl]) {
                                dp[static_cast<size_t>(k + 1)][sl] = cost;
                                par[static_cast<size_t>(k + 1)][sl] =
                                    (a << 8) | this_bp;
                            }
                        }
                    }
                }
            }
        }
    }

    int full = nbits - 1;
    double best = kInf;
    int best_pos = -1;
    for (int b = 0, bp = 0; b < n; ++b, ++bp) {
        double cand = dp[static_cast<size_t>(n)][slot(n, full, full, bp)] + d.g_gm[static_cast<size_t>(b)];
        if (cand < best) {
            best = cand;
            best_pos = bp;
        }
    }

    AlternatingOrder out;
    int s_mask = full, g_mask = full, g_pos = best_pos;
    for (int k = n; k >= 1; --k) {
        // Recover the goal whose position in g_mask is g_pos.
        int goal = -1;
        for (int b = 0, bp = 0; b < n; ++b) {
            if (!(g_mask & (1 << b))) continue;
            if (bp == g_pos) {
                goal = b;
                break;
            }
            ++bp;
        }
        int packed = par[static_cast<size_t>(k)][slot(k, s_mask, g_mask, g_pos)];
        int a = packed >> 8;
        int prev_pos = packed & 0xFF;
        out.starts.push_back(a);
        out.goals.push_back(goal);
        s_mask &= ~(1 << a);
        g_mask &= ~(1 << goal);
        g_pos = prev_pos == 0xFF ? -1 : prev_pos;
    }
    std::reverse(out.starts.begin(), out.starts.end());
    std::reverse(out.goals.begin(), out.goals.end());
    return out;
}

double alternating_cost(const UnlabeledDists& d, const AlternatingOrder& o) {
    double c = d.sm_s[static_cast<size_t>(o.starts[0])];
    for (size_t k = 0; k < o.starts.size(); ++k) {
        c += d.start_goal(o.starts[k], o.goals[k]);
        if (k + 1 < o.starts.size()) c += d.goal_start(o.goals[k], o.starts[k + 1]);
    }
    c += d.g_gm[static_cast<size_t>(o.goals.back())];
    return c;
}

AlternatingOrder alternating_heuristic(const UnlabeledDists& d) {
    const int n = d.n;
    AlternatingOrder o;
    std::vector<bool> s_used(static_cast<size_t>(n), false), g_used(static_cast<size_t>(n), false);
    int last_goal = -1;
    for (int k = 0; k < n; ++k) {
        int a = -1;
        double best = kInf;
        for (int s = 0; s < n; ++s) {
            if (s_used[static_cast<size_t>(s)]) continue;
            double c = last_goal < 0 ? d.sm_s[static_cast<size_t>(s)] : d.goal_start(last_goal, s);
            if (c < best) {
                best = c;
                a = s;
            }
        }
        s_used[static_cast<size_t>(a)] = true;
        int g = -1;
        best = kInf;
        for (int c = 0; c < n; ++c) {
            if (g_used[static_cast<size_t>(c)]) continue;
            double w = d.start_goal(a, c);
            if (w < best) {
                best = w;
                g = c;
            }
        }
        g_used[static_cast<size_t>(g)] = true;
        o.starts.push_back(a);
        o.goals.push_back(g);
        last_goal = g;
    }

    // Local search over the alternating sequence: reversals between
    // same-type positions keep starts on start slots (distances are
    // symmetric, so interior cost is unchanged), and pair relocations are
    // the or-opt analogue.
    auto seq_cost = [&]() { return alternating_cost(d, o); };
    double cur = seq_cost();
    for (long guard = 0; guard < 100000; ++guard) {
        bool improved = false;
        // Candidate edits are applied speculatively and kept when they
        // lower the exact recomputed cost; n stays small enough that the
        // O(n) rescore per candidate is immaterial.
        for (int i = 0; i < n && !improved; ++i) {
            for (int j = i + 1; j < n && !improved; ++j) {
                // Reverse the start subsequence i..j together with the goal
                // subsequence i..j-1 shifted (a proper tour reversal between
                // two same-parity slots).
                AlternatingOrder cand = o;
                std::reverse(cand.starts.begin() + i, cand.starts.begin() + j + 1);
                std::reverse(cand.goals.begin() + i, cand.goals.begin() + j);
                double cc = alternating_cost(d, cand);
                if (cc < cur - 1e-9) {
                    o = cand;
                    cur = cc;
                    improved = true;
                    break;
                }
                cand = o;
                std::reverse(cand.goals.begin() + i, cand.goals.begin() + j + 1);
                std::reverse(cand.starts.begin() + i + 1, cand.starts.begin() + j + 1);
                cc = alternating_cost(d, cand);
                if (cc < cur - 1e-9) {
                    o = cand;
                    cur = cc;
                    improved = true;
                    break;
                }
            }
        }
        if (improved) continue;
        for (int i = 0; i < n && !improved; ++i) {
            for (int p = 0; p <= n && !improved; ++p) {
                if (p == i || p == i + 1) continue;
                AlternatingOrder cand = o;
                int s = cand.starts[static_cast<size_t>(i)];
                int g = cand.goals[static_cast<size_t>(i)];
                cand.starts.erase(cand.starts.begin() + i);
                cand.goals.erase(cand.goals.begin() + i);
                int q = p > i ? p - 1 : p;
                cand.starts.insert(cand.starts.begin() + q, s);
                cand.goals.insert(cand.goals.begin() + q, g);
                double cc = alternating_cost(d, cand);
                if (cc < cur - 1e-9) {
                    o = cand;
                    cur = cc;
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    return o;
}

Tour expand_unlabeled(const TourGraph& g, const AlternatingOrder& o) {
    Tour t;
    t.order.push_back(g.rest_start);
    for (size_t k = 0; k < o.starts.size(); ++k) {
        t.order.push_back(g.start_of[static_cast<size_t>(o.starts[k])]);
        t.order.push_back(g.goal_of[static_cast<size_t>(o.goals[k])]);
    }
    t.order.push_back(g.rest_goal);
    t.order.push_back(g.rest_mid);
    if (o.starts.empty()) {
        t.length = 0.0;
        return t;
    }
    for (size_t k = 0; k < t.order.size(); ++k) {
        t.length += g.weight(t.order[k], t.order[(k + 1) % t.order.size()]);
    }
    return t;
}

}  // namespace

Tour solve_tour(const TourGraph& g, TourMode mode) {
    const int n = static_cast<int>(g.start_of.size());
    if (g.labeled) {
        if (mode == TourMode::Exact && n + 1 > 16) {
            throw SizeLimitError("exact tour solving limited to 16 contracted nodes");
        }
        if (n == 0) return expand_labeled(g, {0});
        Atsp a = empty_travel_contraction(g);
        std::vector<int> order = mode == TourMode::Exact
                                     ? held_karp_cycle(a)
                                     : local_search_cycle(a, nearest_neighbor_cycle(a));
        return expand_labeled(g, order);
    }

    if (mode == TourMode::Exact && n + 2 > 16) {
        throw SizeLimitError("exact tour solving limited to 16 contracted nodes");
    }
    if (mode == TourMode::Exact && n > 12) {
        throw SizeLimitError("exact unlabeled solving sized for at most 12 objects");
    }
    if (n == 0) return expand_unlabeled(g, {});
    UnlabeledDists d = unlabeled_dists(g);
    AlternatingOrder o = mode == TourMode::Exact ? alternating_exact(d) : alternating_heuristic(d);
    return expand_unlabeled(g, o);
}

ActionPlan retrieve_actions(const TourGraph& g, const Tour& tour, const Instance& inst) {
    const int nv = g.size();
    if (static_cast<int>(tour.order.size()) != nv) {
        throw std::invalid_argument("tour does not visit every vertex exactly once");
    }
    std::vector<bool> seen(static_cast<size_t>(nv), false);
    for (int v : tour.order) {
        if (v < 0 || v >= nv || seen[static_cast<size_t>(v)]) {
            throw std::invalid_argument("tour does not visit every vertex exactly once");
        }
        seen[static_cast<size_t>(v)] = true;
    }

    // Walk the cycle from rest_start in the direction away from rest_mid;
    // the other direction replays the same action order backwards.
    size_t pos = 0;
    while (tour.order[pos] != g.rest_start) ++pos;
    auto at = [&](long off) {
        long k = (static_cast<long>(pos) + off) % nv;
        if (k < 0) k += nv;
        return tour.order[static_cast<size_t>(k)];
    };
    long step = at(1) == g.rest_mid ? -1 : 1;
    if (at(step) == g.rest_mid) {
        throw std::invalid_argument("tour has no direction leaving rest_start away from rest_mid");
    }

    ActionPlan plan;
    Pose hand = inst.rest_start;
    long off = step;
    const int n = inst.num_objects();
    for (int count = 0; count < n; ++count) {
        int sv = at(off);
        if (g.vertices[static_cast<size_t>(sv)].kind != TourVertexKind::Start) {
            throw std::invalid_argument("tour lacks the alternating start/goal structure");
        }
        int s_obj = g.vertices[static_cast<size_t>(sv)].object;
        off += step;
        if (g.labeled) {
            int mv = at(off);
            if (g.vertices[static_cast<size_t>(mv)].kind != TourVertexKind::Mid ||
                g.vertices[static_cast<size_t>(mv)].object != s_obj) {
                throw std::invalid_argument("tour lacks the alternating start/goal structure");
            }
            off += step;
        }
        int gv = at(off);
        if (g.vertices[static_cast<size_t>(gv)].kind != TourVertexKind::Goal) {
            throw std::invalid_argument("tour lacks the alternating start/goal structure");
        }
        int g_obj = g.vertices[static_cast<size_t>(gv)].object;
        if (g.labeled && g_obj != s_obj) {
            throw std::invalid_argument("tour carries an object to another object's goal");
        }
        off += step;

        const ObjectSpec& src = inst.objects[static_cast<size_t>(s_obj)];
        const ObjectSpec& dst = inst.objects[static_cast<size_t>(g_obj)];
        Action act;
        act.object_id = src.id;
        act.pick = src.start;
        act.place = dst.goal;
        act.d_e = dist(hand, act.pick);
        act.d_l = dist(act.pick, act.place);
        hand = act.place;
        plan.actions.push_back(act);
    }
    if (at(off) != g.rest_goal) {
        throw std::invalid_argument("tour does not finish at the rest goal");
    }
    plan.d_f = dist(hand, inst.rest_goal);
    return plan;
}

std::string to_tsplib(const TourGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "NAME: " << name << "\n";
    os << "TYPE: TSP\n";
    os << "COMMENT: edge weights are euclidean distances scaled by 1000 and rounded\n";
    os << "DIMENSION: " << g.size() << "\n";
    os << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
    os << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
    os << "EDGE_WEIGHT_SECTION\n";
    for (int i = 0; i < g.size(); ++i) {
        for (int j = 0; j < g.size(); ++j) {
            os << (j > 0 ? " " : "") << llround(g.weight(i, j) * 1000.0);
        }
        os << "\n";
    }
    os << "EOF\n";
    return os.str();
}

}  // namespace tabletop
