#include "tabletop/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tabletop/util.hpp"

namespace tabletop {

namespace {

constexpr double kFieldTol = 1e-9;

int find_object(const Instance& inst, int id) {
    for (int i = 0; i < inst.num_objects(); ++i) {
        if (inst.objects[static_cast<size_t>(i)].id == id) return i;
    }
    return -1;
}

}  // namespace

double ActionPlan::distance_total() const {
    double s = d_f;
    for (const Action& a : actions) s += a.d_e + a.d_l;
    return s;
}

CostBreakdown plan_cost(const Instance& inst, const ActionPlan& plan) {
    Pose at = inst.rest_start;
    for (size_t k = 0; k < plan.actions.size(); ++k) {
        const Action& a = plan.actions[k];
        if (find_object(inst, a.object_id) < 0) {
            throw std::invalid_argument("plan action " + std::to_string(k) +
                                        ": unknown object id " + std::to_string(a.object_id));
        }
        if (std::abs(a.d_e - dist(at, a.pick)) > kFieldTol) {
            throw std::invalid_argument("plan action " + std::to_string(k) +
                                        ": d_e does not match pose chain");
        }
        if (std::abs(a.d_l - dist(a.pick, a.place)) > kFieldTol) {
            throw std::invalid_argument("plan action " + std::to_string(k) +
                                        ": d_l does not match pick/place distance");
        }
        at = a.place;
    }
    if (std::abs(plan.d_f - dist(at, inst.rest_goal)) > kFieldTol) {
        throw std::invalid_argument("plan d_f does not match distance from last release to rest_goal");
    }

    CostBreakdown out;
    out.grasps = plan.grasp_count();
    out.distance = plan.distance_total();
    out.total = out.grasps * (inst.cost.c_g + inst.cost.c_r) + inst.cost.c_m * out.distance;
    return out;
}

std::vector<std::string> validate(const Instance& inst) {
    std::vector<std::string> bad;
    auto note = [&bad](const std::string& s) { bad.push_back(s); };

    if (!(inst.workspace.width() > 0.0) || !(inst.workspace.height() > 0.0)) {
        note("workspace is empty or inverted");
    }
    if (!inst.rest_start.finite() || !inst.workspace.contains(inst.rest_start)) {
        note("rest_start outside workspace");
    }
    if (!inst.rest_goal.finite() || !inst.workspace.contains(inst.rest_goal)) {
        note("rest_goal outside workspace");
    }
    if (!(inst.cost.c_m >= 0.0 && inst.cost.c_g >= 0.0 && inst.cost.c_r >= 0.0)) {
        note("cost weights must be non-negative");
    }

    std::set<int> ids;
    for (int i = 0; i < inst.num_objects(); ++i) {
        const ObjectSpec& o = inst.objects[static_cast<size_t>(i)];
        std::string tag = "object " + std::to_string(o.id);
        if (!ids.insert(o.id).second) note(tag + ": duplicate id");
        if (!(o.radius > 0.0) || !std::isfinite(o.radius)) note(tag + ": radius must be positive");
        if (!o.start.finite() || !inst.workspace.contains(o.start)) note(tag + ": start outside workspace");
        if (!o.goal.finite() || !inst.workspace.contains(o.goal)) note(tag + ": goal outside workspace");
    }

    for (int i = 0; i < inst.num_objects(); ++i) {
        for (int j = i + 1; j < inst.num_objects(); ++j) {
            const ObjectSpec& a = inst.objects[static_cast<size_t>(i)];
            const ObjectSpec& b = inst.objects[static_cast<size_t>(j)];
            if (discs_overlap(a.start, a.radius, b.start, b.radius)) {
                note("starts of objects " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                     " overlap");
            }
            if (discs_overlap(a.goal, a.radius, b.goal, b.radius)) {
                note("goals of objects " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                     " overlap");
            }
        }
    }

    double rmax = 0.0;
    for (const ObjectSpec& o : inst.objects) rmax = std::max(rmax, o.radius);
    for (size_t k = 0; k < inst.buffers.size(); ++k) {
        const Pose& b = inst.buffers[k];
        std::string tag = "buffer " + std::to_string(k);
        if (!b.finite() || !inst.workspace.contains(b)) note(tag + ": outside workspace");
        for (const ObjectSpec& o : inst.objects) {
            // A buffer must accept any object, so test against each radius.
            if (discs_overlap(b, o.radius, o.start, o.radius)) {
                note(tag + ": overlaps start of object " + std::to_string(o.id));
            }
            if (discs_overlap(b, o.radius, o.goal, o.radius)) {
                note(tag + ": overlaps goal of object " + std::to_string(o.id));
            }
        }
        for (size_t l = k + 1; l < inst.buffers.size(); ++l) {
            if (discs_overlap(b, rmax, inst.buffers[l], rmax)) {
                note(tag + ": overlaps buffer " + std::to_string(l));
            }
        }
    }
    return bad;
}

bool starts_goals_disjoint(const Instance& inst) {
    for (const ObjectSpec& a : inst.objects) {
        for (const ObjectSpec& b : inst.objects) {
            if (discs_overlap(a.goal, a.radius, b.start, b.radius)) return false;
        }
    }
    return true;
}

std::vector<std::string> replay_plan(const Instance& inst, const ActionPlan& plan) {
    std::vector<std::string> bad;
    const int n = inst.num_objects();
    std::vector<Pose> cur(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cur[static_cast<size_t>(i)] = inst.objects[static_cast<size_t>(i)].start;

    for (size_t k = 0; k < plan.actions.size(); ++k) {
        const Action& a = plan.actions[k];
        std::string tag = "action " + std::to_string(k);
        int oi = find_object(inst, a.object_id);
        if (oi < 0) {
            bad.push_back(tag + ": unknown object id");
            return bad;
        }
        const ObjectSpec& obj = inst.objects[static_cast<size_t>(oi)];
        if (dist(a.pick, cur[static_cast<size_t>(oi)]) > kFieldTol) {
            bad.push_back(tag + ": pick pose does not match current pose of object " +
                          std::to_string(a.object_id));
        }
        for (int j = 0; j < n; ++j) {
            if (j == oi) continue;
            const ObjectSpec& other = inst.objects[static_cast<size_t>(j)];
            if (discs_overlap(a.place, obj.radius, cur[static_cast<size_t>(j)], other.radius)) {
                bad.push_back(tag + ": release collides with object " + std::to_string(other.id));
            }
        }
        cur[static_cast<size_t>(oi)] = a.place;
    }

    if (inst.labeled) {
        for (int i = 0; i < n; ++i) {
            const ObjectSpec& o = inst.objects[static_cast<size_t>(i)];
            if (dist(cur[static_cast<size_t>(i)], o.goal) > kFieldTol) {
                bad.push_back("object " + std::to_string(o.id) + " does not end at its goal");
            }
        }
    } else {
        std::vector<bool> used(static_cast<size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            bool matched = false;
            for (int j = 0; j < n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                if (dist(cur[static_cast<size_t>(i)], inst.objects[static_cast<size_t>(j)].goal) <= kFieldTol) {
                    used[static_cast<size_t>(j)] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                bad.push_back("object " + std::to_string(inst.objects[static_cast<size_t>(i)].id) +
                              " does not end on any goal");
            }
        }
    }
    return bad;
}

namespace {

Rect default_workspace(int n, double radius) {
    // Area scales linearly with the disc count so rejection sampling stays
    // comfortable at every n: side ~ 4r * sqrt(3n) keeps packing density
    // near 10% even with buffers included.
    double side = 4.0 * radius * std::ceil(std::sqrt(3.0 * std::max(n, 1)) + 1.0);
    return Rect{0.0, 0.0, side, side};
}

struct Sampler {
    Rng rng;
    Rect area;
    double margin;
    long attempts_left;

    Pose draw() {
        if (--attempts_left < 0) throw SamplingError("sampling budget exhausted");
        return Pose(rng.uniform(area.xmin + margin, area.xmax - margin),
                    rng.uniform(area.ymin + margin, area.ymax - margin));
    }
};

bool clear_of(const Pose& p, double r, const std::vector<Pose>& placed, double pr) {
    for (const Pose& q : placed) {
        if (discs_overlap(p, r, q, pr)) return false;
    }
    return true;
}

}  // namespace

Instance generate_no_overlap(int n, std::uint64_t seed, double radius,
                             std::optional<Rect> workspace) {
    if (n < 0) throw std::invalid_argument("generate_no_overlap: n must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("generate_no_overlap: radius must be > 0");

    Instance inst;
    inst.workspace = workspace.value_or(default_workspace(n, radius));
    inst.rest_start = Pose(inst.workspace.xmin, inst.workspace.ymin);
    inst.rest_goal = Pose(inst.workspace.xmax, inst.workspace.ymin);
    inst.labeled = true;

    Sampler s{Rng(seed), inst.workspace, radius, 1000L * std::max(n, 1)};
    std::vector<Pose> placed;
    placed.reserve(static_cast<size_t>(2 * n));
    for (int k = 0; k < 2 * n; ++k) {
        Pose p;
        do {
            p = s.draw();
        } while (!clear_of(p, radius, placed, radius));
        placed.push_back(p);
    }

    for (int i = 0; i < n; ++i) {
        ObjectSpec o;
        o.id = i;
        o.radius = radius;
        o.start = placed[static_cast<size_t>(2 * i)];
        o.goal = placed[static_cast<size_t>(2 * i + 1)];
        inst.objects.push_back(o);
    }
    return inst;
}

namespace {

Instance generate_with_overlap_once(int n, double avg_degree, int max_degree,
                                    std::uint64_t seed, int num_buffers, double radius,
                                    std::optional<Rect> workspace) {

    // Each planned arc (i, j) is realised geometrically by placing start j
    // onto goal i's footprint. A start can sit on at most two goal
    // footprints (the pair is placed deliberately close), which caps the
    // achievable average total degree at 4.
    const int in_cap = std::min(2, max_degree);
    long target_arcs = std::lround(n * avg_degree / 2.0);
    if (target_arcs > static_cast<long>(n) * in_cap) {
        throw std::invalid_argument("generate_with_overlap: avg_degree infeasible under max_degree");
    }

    Rng rng(seed);

    // Plan in-degrees k[j] (number of goal footprints start j must touch).
    std::vector<int> k(static_cast<size_t>(n), 0);
    for (long a = 0; a < target_arcs; ++a) {
        int j;
        do {
            j = rng.below(n);
        } while (k[static_cast<size_t>(j)] >= in_cap);
        ++k[static_cast<size_t>(j)];
    }

    // Pick arc sources: goal usage counts respect the out-degree cap. For
    // k[j] == 2 the two source goals must be placed close together, so they
    // are claimed from the not-yet-clustered pool.
    std::vector<std::vector<int>> sources(static_cast<size_t>(n));
    std::vector<int> out_deg(static_cast<size_t>(n), 0);
    std::vector<bool> clustered(static_cast<size_t>(n), false);
    std::vector<std::pair<int, int>> clusters;  // goal pairs to place close

    auto pick_source = [&](int j, bool need_unclustered) {
        std::vector<int> pool;
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            if (out_deg[static_cast<size_t>(i)] >= max_degree) continue;
            if (need_unclustered && clustered[static_cast<size_t>(i)]) continue;
            bool dup = false;
            for (int s : sources[static_cast<size_t>(j)]) dup = dup || s == i;
            if (!dup) pool.push_back(i);
        }
        if (pool.empty()) throw SamplingError("generate_with_overlap: no eligible arc source");
        return pool[static_cast<size_t>(rng.below(static_cast<int>(pool.size())))];
    };

    for (int j = 0; j < n; ++j) {
        if (k[static_cast<size_t>(j)] == 2) {
            int a = pick_source(j, true);
            clustered[static_cast<size_t>(a)] = true;
            int b = pick_source(j, true);
            clustered[static_cast<size_t>(b)] = true;
            sources[static_cast<size_t>(j)] = {a, b};
            ++out_deg[static_cast<size_t>(a)];
            ++out_deg[static_cast<size_t>(b)];
            clusters.emplace_back(a, b);
        }
    }
    for (int j = 0; j < n; ++j) {
        if (k[static_cast<size_t>(j)] == 1) {
            int a = pick_source(j, false);
            sources[static_cast<size_t>(j)] = {a};
            ++out_deg[static_cast<size_t>(a)];
        }
    }

    Instance inst;
    int total_discs = 2 * n + num_buffers;
    inst.workspace = workspace.value_or(default_workspace((total_discs + 2) / 3 + n, radius));
    inst.rest_start = Pose(inst.workspace.xmin, inst.workspace.ymin);
    inst.rest_goal = Pose(inst.workspace.xmax, inst.workspace.ymin);
    inst.labeled = true;

    Sampler s{Rng(rng.next()), inst.workspace, radius, 1000L * std::max(n, 1)};

    // Goals first: clustered pairs close enough that one disc can overlap
    // both, everything else anywhere disjoint.
    std::vector<Pose> goal(static_cast<size_t>(n));
    std::vector<bool> goal_placed(static_cast<size_t>(n), false);
    std::vector<Pose> all_goals;

    auto place_goal = [&](int i, const Pose& p) {
        goal[static_cast<size_t>(i)] = p;
        goal_placed[static_cast<size_t>(i)] = true;
        all_goals.push_back(p);
    };

    for (auto [a, b] : clusters) {
        for (;;) {
            Pose pa = s.draw();
            double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            double sep = rng.uniform(2.0 * radius + 1e-6, 3.2 * radius);
            Pose pb(pa.x + sep * std::cos(ang), pa.y + sep * std::sin(ang));
            if (!inst.workspace.contains(pb) || pb.x < inst.workspace.xmin + radius ||
                pb.x > inst.workspace.xmax - radius || pb.y < inst.workspace.ymin + radius ||
                pb.y > inst.workspace.ymax - radius) {
                continue;
            }
            if (!clear_of(pa, radius, all_goals, radius)) continue;
            if (!clear_of(pb, radius, all_goals, radius)) continue;
            place_goal(a, pa);
            place_goal(b, pb);
            break;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (goal_placed[static_cast<size_t>(i)]) continue;
        Pose p;
        do {
            p = s.draw();
        } while (!clear_of(p, radius, all_goals, radius));
        place_goal(i, p);
    }

    // Starts: overlap exactly the planned source goals, clear of all other
    // goals and of each other.
    std::vector<Pose> start(static_cast<size_t>(n));
    std::vector<Pose> all_starts;
    for (int j = 0; j < n; ++j) {
        const std::vector<int>& src = sources[static_cast<size_t>(j)];
        for (;;) {
            Pose p;
            if (src.empty()) {
                p = s.draw();
            } else if (src.size() == 1) {
                // Uniform in the source goal's footprint-overlap disc.
                if (--s.attempts_left < 0) throw SamplingError("sampling budget exhausted");
                double rr = (2.0 * radius - 1e-6) * std::sqrt(rng.uniform());
                double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
                const Pose& c = goal[static_cast<size_t>(src[0])];
                p = Pose(c.x + rr * std::cos(ang), c.y + rr * std::sin(ang));
            } else {
                // Near the midpoint of the clustered pair, then verified
                // against both footprints.
                if (--s.attempts_left < 0) throw SamplingError("sampling budget exhausted");
                const Pose& ca = goal[static_cast<size_t>(src[0])];
                const Pose& cb = goal[static_cast<size_t>(src[1])];
                Pose mid((ca.x + cb.x) / 2.0, (ca.y + cb.y) / 2.0);
                double rr = radius * std::sqrt(rng.uniform());
                double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
                p = Pose(mid.x + rr * std::cos(ang), mid.y + rr * std::sin(ang));
            }
            if (p.x < inst.workspace.xmin + radius || p.x > inst.workspace.xmax - radius ||
                p.y < inst.workspace.ymin + radius || p.y > inst.workspace.ymax - radius) {
                continue;
            }
            bool ok = clear_of(p, radius, all_starts, radius);
            for (int i = 0; ok && i < n; ++i) {
                bool want = false;
                for (int sidx : src) want = want || sidx == i;
                bool has = discs_overlap(p, radius, goal[static_cast<size_t>(i)], radius);
                if (want != has) ok = false;
            }
            if (!ok) continue;
            start[static_cast<size_t>(j)] = p;
            all_starts.push_back(p);
            break;
        }
    }

    std::vector<Pose> occupied = all_goals;
    occupied.insert(occupied.end(), all_starts.begin(), all_starts.end());
    for (int b = 0; b < num_buffers; ++b) {
        Pose p;
        do {
            p = s.draw();
        } while (!clear_of(p, radius, occupied, radius));
        occupied.push_back(p);
        inst.buffers.push_back(p);
    }

    for (int i = 0; i < n; ++i) {
        ObjectSpec o;
        o.id = i;
        o.radius = radius;
        o.start = start[static_cast<size_t>(i)];
        o.goal = goal[static_cast<size_t>(i)];
        inst.objects.push_back(o);
    }
    return inst;
}

}  // namespace

Instance generate_with_overlap(int n, double avg_degree, int max_degree,
                               std::uint64_t seed, int num_buffers, double radius,
                               std::optional<Rect> workspace) {
    if (n < 1) throw std::invalid_argument("generate_with_overlap: n must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("generate_with_overlap: radius must be > 0");
    if (avg_degree < 0.0 || avg_degree > 4.0) {
        throw std::invalid_argument("generate_with_overlap: avg_degree must lie in [0, 4]");
    }
    if (max_degree < 1) throw std::invalid_argument("generate_with_overlap: max_degree must be >= 1");
    if (num_buffers < 0) num_buffers = n;

    // An unlucky degree plan can paint the source picker or the geometric
    // sampler into a corner, especially at small n; retry with derived
    // seeds so the generator stays deterministic in the caller's seed.
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt == 64) throw SamplingError("generate_with_overlap: sampling budget exhausted");
        try {
            return generate_with_overlap_once(n, avg_degree, max_degree,
                                              mix_seed(seed, attempt), num_buffers, radius,
                                              workspace);
        } catch (const SamplingError&) {
        }
    }
}

namespace {

using nlohmann::json;

json pose_to_json(const Pose& p) { return json::array({p.x, p.y}); }

Pose pose_from_json(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("instance json: '" + key + "' must be a [x, y] pair");
    }
    return Pose(j[0].get<double>(), j[1].get<double>());
}

const json& need(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument("instance json: missing key '" + key + "'");
    return *it;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
    json j;
    j["workspace"] = {{"xmin", inst.workspace.xmin},
                      {"ymin", inst.workspace.ymin},
                      {"xmax", inst.workspace.xmax},
                      {"ymax", inst.workspace.ymax}};
    j["rest_start"] = pose_to_json(inst.rest_start);
    j["rest_goal"] = pose_to_json(inst.rest_goal);
    j["buffers"] = json::array();
    for (const Pose& b : inst.buffers) j["buffers"].push_back(pose_to_json(b));
    j["labeled"] = inst.labeled;
    j["cost"] = {{"c_m", inst.cost.c_m}, {"c_g", inst.cost.c_g}, {"c_r", inst.cost.c_r}};
    j["objects"] = json::array();
    for (const ObjectSpec& o : inst.objects) {
        j["objects"].push_back({{"id", o.id},
                                {"radius", o.radius},
                                {"start", pose_to_json(o.start)},
                                {"goal", pose_to_json(o.goal)}});
    }
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance json: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("instance json: top level must be an object");

    Instance inst;
    const json& ws = need(j, "workspace");
    inst.workspace.xmin = need(ws, "xmin").get<double>();
    inst.workspace.ymin = need(ws, "ymin").get<double>();
    inst.workspace.xmax = need(ws, "xmax").get<double>();
    inst.workspace.ymax = need(ws, "ymax").get<double>();
    inst.rest_start = pose_from_json(need(j, "rest_start"), "rest_start");
    inst.rest_goal = pose_from_json(need(j, "rest_goal"), "rest_goal");
    for (const json& b : need(j, "buffers")) inst.buffers.push_back(pose_from_json(b, "buffers"));
    inst.labeled = need(j, "labeled").get<bool>();
    const json& c = need(j, "cost");
    inst.cost.c_m = need(c, "c_m").get<double>();
    inst.cost.c_g = need(c, "c_g").get<double>();
    inst.cost.c_r = need(c, "c_r").get<double>();
    for (const json& o : need(j, "objects")) {
        ObjectSpec spec;
        spec.id = need(o, "id").get<int>();
        spec.radius = need(o, "radius").get<double>();
        spec.start = pose_from_json(need(o, "start"), "objects[].start");
        spec.goal = pose_from_json(need(o, "goal"), "objects[].goal");
        inst.objects.push_back(spec);
    }
    return inst;
}

std::string plan_to_json(const ActionPlan& plan) {
    json j;
    j["actions"] = json::array();
    for (const Action& a : plan.actions) {
        j["actions"].push_back({{"object", a.object_id},
                                {"pick", pose_to_json(a.pick)},
                                {"place", pose_to_json(a.place)},
                                {"d_e", a.d_e},
                                {"d_l", a.d_l}});
    }
    j["d_f"] = plan.d_f;
    return j.dump(2) + "\n";
}

ActionPlan plan_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("plan json: ") + e.what());
    }
    ActionPlan plan;
    for (const json& a : need(j, "actions")) {
        Action act;
        act.object_id = need(a, "object").get<int>();
        act.pick = pose_from_json(need(a, "pick"), "actions[].pick");
        act.place = pose_from_json(need(a, "place"), "actions[].place");
        act.d_e = need(a, "d_e").get<double>();
        act.d_l = need(a, "d_l").get<double>();
        plan.actions.push_back(act);
    }
    plan.d_f = need(j, "d_f").get<double>();
    return plan;
}

}  // namespace tabletop
