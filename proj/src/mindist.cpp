#include "tabletop/mindist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "tabletop/depgraph.hpp"
#include "tabletop/util.hpp"

namespace tabletop {

namespace {

Pose spot_pose(const Instance& inst, const Spot& s) {
    switch (s.kind) {
        case SpotKind::RestStart: return inst.rest_start;
        case SpotKind::RestGoal: return inst.rest_goal;
        case SpotKind::Start: return inst.objects[static_cast<size_t>(s.index)].start;
        case SpotKind::Goal: return inst.objects[static_cast<size_t>(s.index)].goal;
        case SpotKind::Buffer: return inst.buffers[static_cast<size_t>(s.index)];
    }
    throw std::logic_error("bad spot kind");
}

using Bucket = std::vector<int>;  // variable ids

struct Builder {
    const Instance& inst;
    const DependencyDigraph& dep;
    TimeExpandedModel m;
    int n, p, T;

    // Constraint buckets per spot and step t = 1..T at [t-1]. Pick spots
    // collect arriving empty edges and departing loaded edges; place spots
    // collect arriving loaded edges and departing empty edges (departure
    // step index for those, valid 1..T-1).
    std::vector<std::vector<Bucket>> pin_s, lout_s, lin_g, eout_g;
    std::vector<std::vector<Bucket>> pin_b, lout_b, lin_b, eout_b;  // [j*p+k]
    std::vector<int> first_pick;  // the rest_start fan-out
    std::vector<int> last_drop;   // the rest_goal fan-in, per object

    Builder(const Instance& inst_, const DependencyDigraph& dep_, std::vector<int> buffered)
        : inst(inst_), dep(dep_) {
        n = inst.num_objects();
        p = static_cast<int>(buffered.size());
        T = n + p;
        m.n = n;
        m.p = p;
        m.horizon = T;
        m.buffered = std::move(buffered);
    }

    bool is_buffered(int i) const {
        return std::binary_search(m.buffered.begin(), m.buffered.end(), i);
    }

    int add_edge(Spot from, Spot to, int t, bool loaded, int object, const std::string& name) {
        int v = m.model.add_var(name);
        EdgeVar e;
        e.var = v;
        e.from = from;
        e.to = to;
        e.t = t;
        e.loaded = loaded;
        e.object = object;
        e.length = dist(spot_pose(inst, from), spot_pose(inst, to));
        m.model.set_objective_coef(v, e.length);
        m.edges.push_back(e);
        return v;
    }

    void build() {
        auto grid = [this](int rows) {
            return std::vector<std::vector<Bucket>>(static_cast<size_t>(rows),
                                                    std::vector<Bucket>(static_cast<size_t>(T)));
        };
        pin_s = grid(n);
        lout_s = grid(n);
        lin_g = grid(n);
        eout_g = grid(n);
        pin_b = grid(p * p);
        lout_b = grid(p * p);
        lin_b = grid(p * p);
        eout_b = grid(p * p);

        make_nodes();
        make_edges();
        constraints();
    }

    void make_nodes() {
        m.start_occ.assign(static_cast<size_t>(n), {});
        m.goal_occ.assign(static_cast<size_t>(n), {});
        for (int i = 0; i < n; ++i) {
            for (int t = 1; t <= T - 1; ++t) {
                m.start_occ[static_cast<size_t>(i)].push_back(
                    m.model.add_var("n_s" + std::to_string(i) + "_t" + std::to_string(t)));
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int t = 1; t <= T - 1; ++t) {
                m.goal_occ[static_cast<size_t>(i)].push_back(
                    m.model.add_var("n_g" + std::to_string(i) + "_t" + std::to_string(t)));
            }
        }
        m.buffer_occ.assign(static_cast<size_t>(p),
                            std::vector<std::vector<int>>(static_cast<size_t>(p)));
        for (int j = 0; j < p; ++j) {
            int obj = m.buffered[static_cast<size_t>(j)];
            for (int k = 0; k < p; ++k) {
                for (int t = 1; t <= T - 1; ++t) {
                    m.buffer_occ[static_cast<size_t>(j)][static_cast<size_t>(k)].push_back(
                        m.model.add_var("n_b" + std::to_string(obj) + "_" + std::to_string(k) +
                                        "_t" + std::to_string(t)));
                }
            }
        }
    }

    void make_edges() {
        // First empty approach from the rest pose, step 1.
        for (int i = 0; i < n; ++i) {
            int v = add_edge({SpotKind::RestStart, -1}, {SpotKind::Start, i}, 1, false, i,
                             "a_ss" + std::to_string(i));
            first_pick.push_back(v);
            pin_s[static_cast<size_t>(i)][0].push_back(v);
        }
        // Direct carries, only for objects that never visit a buffer.
        for (int i = 0; i < n; ++i) {
            if (is_buffered(i)) continue;
            for (int t = 1; t <= T; ++t) {
                int v = add_edge({SpotKind::Start, i}, {SpotKind::Goal, i}, t, true, i,
                                 "a_d" + std::to_string(i) + "_t" + std::to_string(t));
                lout_s[static_cast<size_t>(i)][static_cast<size_t>(t - 1)].push_back(v);
                lin_g[static_cast<size_t>(i)][static_cast<size_t>(t - 1)].push_back(v);
            }
        }
        // Carries into and out of buffer slots. A stash cannot be the last
        // action and an unstash cannot be the first.
        for (int j = 0; j < p; ++j) {
            int obj = m.buffered[static_cast<size_t>(j)];
            for (int k = 0; k < p; ++k) {
                for (int t = 1; t <= T - 1; ++t) {
                    int v = add_edge({SpotKind::Start, obj}, {SpotKind::Buffer, k}, t, true, obj,
                                     "a_sb" + std::to_string(obj) + "_" + std::to_string(k) +
                                         "_t" + std::to_string(t));
                    lout_s[static_cast<size_t>(obj)][static_cast<size_t>(t - 1)].push_back(v);
                    lin_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)].push_back(v);
                }
                for (int t = 2; t <= T; ++t) {
                    int v = add_edge({SpotKind::Buffer, k}, {SpotKind::Goal, obj}, t, true, obj,
                                     "a_bg" + std::to_string(obj) + "_" + std::to_string(k) +
                                         "_t" + std::to_string(t));
                    lout_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)].push_back(v);
                    lin_g[static_cast<size_t>(obj)][static_cast<size_t>(t - 1)].push_back(v);
                }
            }
        }
        // Empty transfers: depart a placement after step t, arrive at the
        // step-t+1 pick. EdgeVar.t records the arrival step.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int t = 1; t <= T - 1; ++t) {
                    int v = add_edge({SpotKind::Goal, i}, {SpotKind::Start, j}, t + 1, false, j,
                                     "a_gs" + std::to_string(i) + "_" + std::to_string(j) + "_t" +
                                         std::to_string(t));
                    eout_g[static_cast<size_t>(i)][static_cast<size_t>(t - 1)].push_back(v);
                    pin_s[static_cast<size_t>(j)][static_cast<size_t>(t)].push_back(v);
                }
            }
        }
        for (int j = 0; j < p; ++j) {
            int obj = m.buffered[static_cast<size_t>(j)];
            for (int k = 0; k < p; ++k) {
                for (int i = 0; i < n; ++i) {
                    for (int t = 1; t <= T - 1; ++t) {
                        int v = add_edge({SpotKind::Buffer, k}, {SpotKind::Start, i}, t + 1, false,
                                         i,
                                         "a_bs" + std::to_string(obj) + "_" + std::to_string(k) +
                                             "_" + std::to_string(i) + "_t" + std::to_string(t));
                        eout_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)].push_back(v);
                        pin_s[static_cast<size_t>(i)][static_cast<size_t>(t)].push_back(v);
                    }
                }
                for (int i = 0; i < n; ++i) {
                    for (int t = 1; t <= T - 1; ++t) {
                        int v = add_edge({SpotKind::Goal, i}, {SpotKind::Buffer, k}, t + 1, false,
                                         obj,
                                         "a_gb" + std::to_string(i) + "_" + std::to_string(obj) +
                                             "_" + std::to_string(k) + "_t" + std::to_string(t));
                        eout_g[static_cast<size_t>(i)][static_cast<size_t>(t - 1)].push_back(v);
                        pin_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t)].push_back(v);
                    }
                }
            }
        }
        for (int j = 0; j < p; ++j) {
            int obj = m.buffered[static_cast<size_t>(j)];
            for (int k = 0; k < p; ++k) {
                for (int j2 = 0; j2 < p; ++j2) {
                    int obj2 = m.buffered[static_cast<size_t>(j2)];
                    for (int k2 = 0; k2 < p; ++k2) {
                        for (int t = 1; t <= T - 1; ++t) {
                            int v = add_edge(
                                {SpotKind::Buffer, k}, {SpotKind::Buffer, k2}, t + 1, false, obj2,
                                "a_bb" + std::to_string(obj) + "_" + std::to_string(k) + "_" +
                                    std::to_string(obj2) + "_" + std::to_string(k2) + "_t" +
                                    std::to_string(t));
                            eout_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)].push_back(v);
                            pin_b[static_cast<size_t>(j2 * p + k2)][static_cast<size_t>(t)].push_back(v);
                        }
                    }
                }
            }
        }
        // Final return to rest after the step-T placement.
        for (int i = 0; i < n; ++i) {
            int v = add_edge({SpotKind::Goal, i}, {SpotKind::RestGoal, -1}, T, false, -1,
                             "a_gg" + std::to_string(i));
            last_drop.push_back(v);
        }
    }

    void sum_minus_sum(const Bucket& plus, const Bucket& minus, Relation rel, double rhs,
                       std::string name) {
        if (plus.empty() && minus.empty()) return;
        std::vector<LinearTerm> terms;
        for (int v : plus) terms.push_back({v, 1.0});
        for (int v : minus) terms.push_back({v, -1.0});
        m.model.add_constraint(std::move(terms), rel, rhs, std::move(name));
    }

    void constraints() {
        // Exactly one first approach.
        {
            std::vector<LinearTerm> terms;
            for (int v : first_pick) terms.push_back({v, 1.0});
            m.model.add_constraint(std::move(terms), Relation::Equal, 1.0, "one_first_pick");
        }

        // Every arrival at a pick is consumed by a carry that same step.
        for (int i = 0; i < n; ++i) {
            for (int t = 1; t <= T; ++t) {
                sum_minus_sum(lout_s[static_cast<size_t>(i)][static_cast<size_t>(t - 1)],
                              pin_s[static_cast<size_t>(i)][static_cast<size_t>(t - 1)],
                              Relation::Equal, 0.0,
                              "pick_s" + std::to_string(i) + "_t" + std::to_string(t));
            }
        }
        for (int j = 0; j < p; ++j) {
            for (int k = 0; k < p; ++k) {
                for (int t = 1; t <= T; ++t) {
                    sum_minus_sum(lout_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)],
                                  pin_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)],
                                  Relation::Equal, 0.0,
                                  "pick_b" + std::to_string(m.buffered[static_cast<size_t>(j)]) +
                                      "_" + std::to_string(k) + "_t" + std::to_string(t));
                }
            }
        }

        // Every placement before the last step departs empty afterwards.
        for (int i = 0; i < n; ++i) {
            for (int t = 1; t <= T - 1; ++t) {
                sum_minus_sum(eout_g[static_cast<size_t>(i)][static_cast<size_t>(t - 1)],
                              lin_g[static_cast<size_t>(i)][static_cast<size_t>(t - 1)],
                              Relation::Equal, 0.0,
                              "rel_g" + std::to_string(i) + "_t" + std::to_string(t));
            }
        }
        for (int j = 0; j < p; ++j) {
            for (int k = 0; k < p; ++k) {
                for (int t = 1; t <= T - 1; ++t) {
                    sum_minus_sum(eout_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)],
                                  lin_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)],
                                  Relation::Equal, 0.0,
                                  "rel_b" + std::to_string(m.buffered[static_cast<size_t>(j)]) +
                                      "_" + std::to_string(k) + "_t" + std::to_string(t));
                }
            }
        }

        // The step-T placement hands over to the rest return, exactly once.
        for (int i = 0; i < n; ++i) {
            Bucket lhs{last_drop[static_cast<size_t>(i)]};
            sum_minus_sum(lhs, lin_g[static_cast<size_t>(i)][static_cast<size_t>(T - 1)],
                          Relation::Equal, 0.0, "last_g" + std::to_string(i));
        }
        {
            std::vector<LinearTerm> terms;
            for (int v : last_drop) terms.push_back({v, 1.0});
            m.model.add_constraint(std::move(terms), Relation::Equal, 1.0, "one_last_drop");
        }

        // Occupancy bookkeeping with the boundary states substituted:
        // everything on its start before step 1, everything on its goal and
        // every buffer empty after step T.
        for (int i = 0; i < n; ++i) {
            for (int t = 1; t <= T; ++t) {
                std::vector<LinearTerm> terms;
                double rhs = 0.0;
                if (t <= T - 1) terms.push_back({m.start_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 1)], 1.0});
                if (t >= 2) terms.push_back({m.start_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 2)], -1.0});
                else rhs += 1.0;
                for (int v : lout_s[static_cast<size_t>(i)][static_cast<size_t>(t - 1)]) terms.push_back({v, 1.0});
                m.model.add_constraint(std::move(terms), Relation::Equal, rhs,
                                       "occ_s" + std::to_string(i) + "_t" + std::to_string(t));
            }
            for (int t = 1; t <= T; ++t) {
                std::vector<LinearTerm> terms;
                double rhs = 0.0;
                if (t <= T - 1) terms.push_back({m.goal_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 1)], 1.0});
                else rhs -= 1.0;
                if (t >= 2) terms.push_back({m.goal_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 2)], -1.0});
                for (int v : lin_g[static_cast<size_t>(i)][static_cast<size_t>(t - 1)]) terms.push_back({v, -1.0});
                m.model.add_constraint(std::move(terms), Relation::Equal, rhs,
                                       "occ_g" + std::to_string(i) + "_t" + std::to_string(t));
            }
        }
        for (int j = 0; j < p; ++j) {
            for (int k = 0; k < p; ++k) {
                for (int t = 1; t <= T; ++t) {
                    std::vector<LinearTerm> terms;
                    if (t <= T - 1) terms.push_back({m.buffer_occ[static_cast<size_t>(j)][static_cast<size_t>(k)][static_cast<size_t>(t - 1)], 1.0});
                    if (t >= 2) terms.push_back({m.buffer_occ[static_cast<size_t>(j)][static_cast<size_t>(k)][static_cast<size_t>(t - 2)], -1.0});
                    for (int v : lin_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)]) terms.push_back({v, -1.0});
                    for (int v : lout_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)]) terms.push_back({v, 1.0});
                    m.model.add_constraint(std::move(terms), Relation::Equal, 0.0,
                                           "occ_b" + std::to_string(m.buffered[static_cast<size_t>(j)]) +
                                               "_" + std::to_string(k) + "_t" + std::to_string(t));
                }
            }
        }

        // An empty approach needs its target occupied one step earlier.
        for (int i = 0; i < n; ++i) {
            for (int t = 2; t <= T; ++t) {
                std::vector<LinearTerm> terms;
                for (int v : pin_s[static_cast<size_t>(i)][static_cast<size_t>(t - 1)]) terms.push_back({v, 1.0});
                if (terms.empty()) continue;
                terms.push_back({m.start_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 2)], -1.0});
                m.model.add_constraint(std::move(terms), Relation::LessEq, 0.0,
                                       "vac_s" + std::to_string(i) + "_t" + std::to_string(t));
            }
        }
        for (int j = 0; j < p; ++j) {
            for (int k = 0; k < p; ++k) {
                for (int t = 2; t <= T; ++t) {
                    std::vector<LinearTerm> terms;
                    for (int v : pin_b[static_cast<size_t>(j * p + k)][static_cast<size_t>(t - 1)]) terms.push_back({v, 1.0});
                    if (terms.empty()) continue;
                    terms.push_back({m.buffer_occ[static_cast<size_t>(j)][static_cast<size_t>(k)][static_cast<size_t>(t - 2)], -1.0});
                    m.model.add_constraint(std::move(terms), Relation::LessEq, 0.0,
                                           "vac_b" + std::to_string(m.buffered[static_cast<size_t>(j)]) +
                                               "_" + std::to_string(k) + "_t" + std::to_string(t));
                }
            }
        }

        // One object per buffer slot at a time.
        for (int k = 0; k < p; ++k) {
            for (int t = 1; t <= T - 1; ++t) {
                std::vector<LinearTerm> terms;
                for (int j = 0; j < p; ++j) {
                    terms.push_back({m.buffer_occ[static_cast<size_t>(j)][static_cast<size_t>(k)][static_cast<size_t>(t - 1)], 1.0});
                }
                m.model.add_constraint(std::move(terms), Relation::LessEq, 1.0,
                                       "cap_b" + std::to_string(k) + "_t" + std::to_string(t));
            }
        }

        // A goal placement may not coexist with an unmoved object on an
        // overlapping start footprint.
        for (const auto& arc : dep.arcs) {
            for (int t = 1; t <= T - 1; ++t) {
                std::vector<LinearTerm> terms{
                    {m.goal_occ[static_cast<size_t>(arc.first)][static_cast<size_t>(t - 1)], 1.0},
                    {m.start_occ[static_cast<size_t>(arc.second)][static_cast<size_t>(t - 1)], 1.0}};
                m.model.add_constraint(std::move(terms), Relation::LessEq, 1.0,
                                       "dep_" + std::to_string(arc.first) + "_" +
                                           std::to_string(arc.second) + "_t" + std::to_string(t));
            }
        }
    }
};

const EdgeVar* find_unique(const TimeExpandedModel& m, const std::vector<std::uint8_t>& x,
                           bool loaded, int t, const Spot& from) {
    const EdgeVar* hit = nullptr;
    for (const EdgeVar& e : m.edges) {
        if (e.loaded != loaded || e.t != t || !(e.from == from)) continue;
        if (!loaded && e.to.kind == SpotKind::RestGoal) continue;
        if (!x[static_cast<size_t>(e.var)]) continue;
        if (hit) throw std::logic_error("schedule decode: step is not unique");
        hit = &e;
    }
    if (!hit) throw std::logic_error("schedule decode: chain breaks at step " + std::to_string(t));
    return hit;
}

ActionPlan decode_schedule(const Instance& inst, const TimeExpandedModel& m,
                           const std::vector<std::uint8_t>& x) {
    ActionPlan plan;
    const EdgeVar* approach = find_unique(m, x, false, 1, {SpotKind::RestStart, -1});
    for (int step = 1; step <= m.horizon; ++step) {
        const EdgeVar* carry = find_unique(m, x, true, step, approach->to);
        Action a;
        a.object_id = inst.objects[static_cast<size_t>(carry->object)].id;
        a.pick = spot_pose(inst, carry->from);
        a.place = spot_pose(inst, carry->to);
        a.d_e = approach->length;
        a.d_l = carry->length;
        plan.actions.push_back(a);
        if (step < m.horizon) {
            approach = find_unique(m, x, false, step + 1, carry->to);
        } else {
            const EdgeVar* ret = nullptr;
            for (const EdgeVar& e : m.edges) {
                if (e.to.kind != SpotKind::RestGoal || !x[static_cast<size_t>(e.var)]) continue;
                if (ret) throw std::logic_error("schedule decode: several rest returns");
                ret = &e;
            }
            if (!ret || !(ret->from == carry->to)) {
                throw std::logic_error("schedule decode: rest return does not leave the last placement");
            }
            plan.d_f = ret->length;
        }
    }
    return plan;
}

/// Stash every buffered object, run the unobstructed residual order, then
/// empty the buffers. Always feasible, so it seeds the search.
std::vector<std::uint8_t> reference_schedule(const TimeExpandedModel& m,
                                             const DependencyDigraph& dep) {
    struct Step {
        Spot pick, place;
        int object;
    };
    std::vector<Step> steps;
    for (int j = 0; j < m.p; ++j) {
        int obj = m.buffered[static_cast<size_t>(j)];
        steps.push_back({{SpotKind::Start, obj}, {SpotKind::Buffer, j}, obj});
    }
    std::vector<int> residual;
    for (int i = 0; i < m.n; ++i) {
        if (!std::binary_search(m.buffered.begin(), m.buffered.end(), i)) residual.push_back(i);
    }
    auto order = movable_order(dep.induced(residual));
    if (!order) throw std::logic_error("buffered set did not break every cycle");
    for (int v : *order) {
        int obj = residual[static_cast<size_t>(v)];
        steps.push_back({{SpotKind::Start, obj}, {SpotKind::Goal, obj}, obj});
    }
    for (int j = 0; j < m.p; ++j) {
        int obj = m.buffered[static_cast<size_t>(j)];
        steps.push_back({{SpotKind::Buffer, j}, {SpotKind::Goal, obj}, obj});
    }

    std::vector<std::uint8_t> x(static_cast<size_t>(m.model.num_vars()), 0);
    auto mark = [&m, &x](bool loaded, int t, const Spot& from, const Spot& to, int object) {
        for (const EdgeVar& e : m.edges) {
            if (e.loaded == loaded && e.t == t && e.from == from && e.to == to &&
                e.object == object) {
                x[static_cast<size_t>(e.var)] = 1;
                return;
            }
        }
        throw std::logic_error("reference schedule uses a missing edge");
    };

    Spot prev_place{SpotKind::RestStart, -1};
    for (int t = 1; t <= m.horizon; ++t) {
        const Step& s = steps[static_cast<size_t>(t - 1)];
        mark(false, t, prev_place, s.pick, s.object);
        mark(true, t, s.pick, s.place, s.object);
        prev_place = s.place;
    }
    mark(false, m.horizon, prev_place, {SpotKind::RestGoal, -1}, -1);

    // Occupancy trail: replay the schedule and stamp the states.
    std::vector<int> where(static_cast<size_t>(m.n), 0);  // 0 start, 1 goal, 2+k buffer slot k
    for (int t = 1; t <= m.horizon - 1; ++t) {
        const Step& s = steps[static_cast<size_t>(t - 1)];
        where[static_cast<size_t>(s.object)] = s.place.kind == SpotKind::Goal ? 1 : 2 + s.place.index;
        for (int i = 0; i < m.n; ++i) {
            if (where[static_cast<size_t>(i)] == 0) {
                x[static_cast<size_t>(m.start_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 1)])] = 1;
            } else if (where[static_cast<size_t>(i)] == 1) {
                x[static_cast<size_t>(m.goal_occ[static_cast<size_t>(i)][static_cast<size_t>(t - 1)])] = 1;
            }
        }
        for (int j = 0; j < m.p; ++j) {
            int obj = m.buffered[static_cast<size_t>(j)];
            int w = where[static_cast<size_t>(obj)];
            if (w >= 2) {
                x[static_cast<size_t>(m.buffer_occ[static_cast<size_t>(j)][static_cast<size_t>(w - 2)][static_cast<size_t>(t - 1)])] = 1;
            }
        }
    }
    return x;
}

}  // namespace

TimeExpandedModel build_mindist_model(const Instance& inst, const std::vector<int>& buffered) {
    if (inst.num_objects() == 0) {
        throw std::invalid_argument("scheduling model needs at least one object");
    }
    if (!inst.labeled) {
        throw std::invalid_argument("scheduling model requires a labeled instance");
    }
    std::vector<int> buf = buffered;
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    for (int v : buf) {
        if (v < 0 || v >= inst.num_objects()) {
            throw std::invalid_argument("buffered object index out of range");
        }
    }
    if (buf.size() > inst.buffers.size()) {
        throw std::invalid_argument("instance provides too few buffer spots");
    }
    DependencyDigraph dep = build_dependency_graph(inst);
    if (!dep.without(buf).acyclic()) {
        throw std::invalid_argument("buffered set leaves a dependency cycle");
    }
    Builder b(inst, dep, std::move(buf));
    b.build();
    return std::move(b.m);
}

MindistResult solve_mindist(const Instance& inst, const std::vector<int>& buffered,
                            const IlpEngine& engine, const SolveBudget* budget) {
    MindistResult r;
    if (inst.num_objects() == 0) {
        r.status = SolveStatus::Optimal;
        r.plan.d_f = dist(inst.rest_start, inst.rest_goal);
        r.distance = r.plan.distance_total();
        return r;
    }
    TimeExpandedModel m = build_mindist_model(inst, buffered);
    DependencyDigraph dep = build_dependency_graph(inst);
    std::vector<std::uint8_t> warm = reference_schedule(m, dep);

    SolveBudget b = budget ? *budget : engine.default_budget;
    if (!budget && b.max_seconds > 10.0) b.max_seconds = 10.0;
    IlpSolution sol = engine.solve(m.model, b, &warm);
    r.status = sol.status;
    r.nodes_explored = sol.nodes_explored;
    if (!sol.assignment.empty()) {
        r.plan = decode_schedule(inst, m, sol.assignment);
        auto bad = replay_plan(inst, r.plan);
        if (!bad.empty()) {
            throw std::logic_error("decoded schedule fails replay: " + bad.front());
        }
        r.distance = r.plan.distance_total();
        if (std::fabs(r.distance - sol.objective) > 1e-6 * (1.0 + std::fabs(sol.objective))) {
            throw std::logic_error("decoded schedule distance disagrees with the objective");
        }
    }
    return r;
}

ActionPlan greedy_plan(const Instance& inst) {
    if (!inst.labeled) throw std::invalid_argument("greedy plan requires a labeled instance");
    const int n = inst.num_objects();
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&inst](int a, int b) {
        return inst.objects[static_cast<size_t>(a)].id < inst.objects[static_cast<size_t>(b)].id;
    });

    std::vector<Pose> pos(static_cast<size_t>(n));
    std::vector<bool> at_start(static_cast<size_t>(n), true);
    for (int i = 0; i < n; ++i) pos[static_cast<size_t>(i)] = inst.objects[static_cast<size_t>(i)].start;
    std::vector<int> holder(inst.buffers.size(), -1);

    ActionPlan plan;
    Pose hand = inst.rest_start;
    auto emit = [&](int obj, Pose place) {
        Action a;
        a.object_id = inst.objects[static_cast<size_t>(obj)].id;
        a.pick = pos[static_cast<size_t>(obj)];
        a.place = place;
        a.d_e = dist(hand, a.pick);
        a.d_l = dist(a.pick, a.place);
        plan.actions.push_back(a);
        pos[static_cast<size_t>(obj)] = place;
        hand = place;
    };

    for (int o : order) {
        const ObjectSpec& obj = inst.objects[static_cast<size_t>(o)];
        // Clear the goal footprint of everything still parked on a start.
        for (int w : order) {
            if (w == o || !at_start[static_cast<size_t>(w)]) continue;
            const ObjectSpec& ow = inst.objects[static_cast<size_t>(w)];
            if (!discs_overlap(obj.goal, obj.radius, ow.start, ow.radius)) continue;
            size_t slot = 0;
            while (slot < holder.size() && holder[slot] >= 0) ++slot;
            if (slot == holder.size()) {
                throw std::runtime_error("greedy plan: no free buffer while clearing goal of object " +
                                         std::to_string(obj.id));
            }
            emit(w, inst.buffers[slot]);
            holder[slot] = w;
            at_start[static_cast<size_t>(w)] = false;
        }
        for (size_t k = 0; k < holder.size(); ++k) {
            if (holder[k] == o) holder[k] = -1;
        }
        at_start[static_cast<size_t>(o)] = false;
        emit(o, obj.goal);
    }
    plan.d_f = plan.actions.empty() ? dist(inst.rest_start, inst.rest_goal)
                                    : dist(hand, inst.rest_goal);
    return plan;
}

ActionPlan random_plan(const Instance& inst, std::uint64_t seed) {
    if (!starts_goals_disjoint(inst)) {
        throw std::invalid_argument("random plan requires starts disjoint from goals");
    }
    const int n = inst.num_objects();
    Rng rng(seed);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<int> target = order;
    if (!inst.labeled) {
        for (int i = 0; i < n; ++i) target[static_cast<size_t>(i)] = i;
        rng.shuffle(target);
    }

    ActionPlan plan;
    Pose hand = inst.rest_start;
    for (int k = 0; k < n; ++k) {
        const ObjectSpec& src = inst.objects[static_cast<size_t>(order[static_cast<size_t>(k)])];
        const ObjectSpec& dst = inst.objects[static_cast<size_t>(target[static_cast<size_t>(k)])];
        Action a;
        a.object_id = src.id;
        a.pick = src.start;
        a.place = dst.goal;
        a.d_e = dist(hand, a.pick);
        a.d_l = dist(a.pick, a.place);
        hand = a.place;
        plan.actions.push_back(a);
    }
    plan.d_f = plan.actions.empty() ? dist(inst.rest_start, inst.rest_goal)
                                    : dist(hand, inst.rest_goal);
    return plan;
}

}  // namespace tabletop
