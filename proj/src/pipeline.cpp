#include "tabletop/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "tabletop/depgraph.hpp"
#include "tabletop/util.hpp"

namespace tabletop {

std::string method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::Auto: return "auto";
        case SolveMethod::TspExact: return "tsp-exact";
        case SolveMethod::TspHeuristic: return "tsp-heur";
        case SolveMethod::FvsSingle: return "fvs-single";
        case SolveMethod::FvsComplete: return "fvs-complete";
        case SolveMethod::Greedy: return "greedy";
        case SolveMethod::Random: return "random";
    }
    throw std::logic_error("bad method");
}

std::optional<SolveMethod> method_from_name(const std::string& name) {
    for (SolveMethod m : {SolveMethod::Auto, SolveMethod::TspExact, SolveMethod::TspHeuristic,
                          SolveMethod::FvsSingle, SolveMethod::FvsComplete, SolveMethod::Greedy,
                          SolveMethod::Random}) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

namespace {

void finish(SolveReport& r, const Instance& inst, Stopwatch& clock) {
    r.cost = plan_cost(inst, r.plan);
    auto bad = replay_plan(inst, r.plan);
    if (!bad.empty()) throw std::logic_error("produced plan fails replay: " + bad.front());
    r.seconds = clock.seconds();
}

std::vector<int> to_ids(const Instance& inst, const std::vector<int>& indices) {
    std::vector<int> ids;
    for (int v : indices) ids.push_back(inst.objects[static_cast<size_t>(v)].id);
    return ids;
}

}  // namespace

SolveReport solve_no_overlap(const Instance& inst, TourMode mode) {
    Stopwatch clock;
    SolveReport r;
    r.method = mode == TourMode::Exact ? "tsp-exact" : "tsp-heur";
    TourGraph g = inst.labeled ? build_labeled_tour_graph(inst) : build_unlabeled_tour_graph(inst);
    Tour tour = solve_tour(g, mode);
    r.plan = retrieve_actions(g, tour, inst);
    r.optimal_grasps = true;  // one action per object is trivially minimal here
    r.optimal_distance = mode == TourMode::Exact;
    finish(r, inst, clock);
    return r;
}

SolveReport solve_fvs_single(const Instance& inst, const IlpEngine& engine,
                             const SolveOptions& options) {
    Stopwatch clock;
    SolveReport r;
    r.method = "fvs-single";
    DependencyDigraph dep = build_dependency_graph(inst);
    r.dependency_arcs = dep.num_arcs();

    FeedbackVertexSet fvs = fvs_ilp_constraint(dep, engine);
    if (!fvs.certified_optimal) {
        r.budget_exhausted = true;
        FeedbackVertexSet greedy = fvs_msch(dep, options.cycle_cap);
        if (greedy.size() < fvs.size()) fvs = greedy;
    }
    r.fvs_size = fvs.size();
    r.buffered_ids = to_ids(inst, fvs.vertices);
    r.optimal_grasps = fvs.certified_optimal;

    MindistResult sched = solve_mindist(inst, fvs.vertices, engine,
                                        options.ilp_budget ? &*options.ilp_budget : nullptr);
    if (sched.status == SolveStatus::BudgetExhausted) r.budget_exhausted = true;
    if (sched.plan.actions.empty() && inst.num_objects() > 0) {
        throw std::runtime_error("scheduling found no plan within budget");
    }
    r.plan = sched.plan;
    // A unique minimum buffered set (the empty one) makes this globally
    // travel-optimal; otherwise another minimum set could do better.
    r.optimal_distance = sched.status == SolveStatus::Optimal && dep.acyclic();
    r.branches_explored = 1;
    finish(r, inst, clock);
    return r;
}

SolveReport solve_fvs_complete(const Instance& inst, const IlpEngine& engine,
                               const SolveOptions& options) {
    Stopwatch clock;
    SolveReport r;
    r.method = "fvs-complete";
    DependencyDigraph dep = build_dependency_graph(inst);
    r.dependency_arcs = dep.num_arcs();

    bool truncated = false;
    std::vector<FeedbackVertexSet> sets =
        enumerate_optimal_fvs(dep, engine, options.cycle_cap, options.max_branches, &truncated);
    if (sets.empty()) throw std::logic_error("no buffered set candidates found");
    r.fvs_size = sets.front().size();

    std::vector<MindistResult> branch(sets.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t b = next.fetch_add(1); b < sets.size(); b = next.fetch_add(1)) {
            branch[b] = solve_mindist(inst, sets[b].vertices, engine,
                                      options.ilp_budget ? &*options.ilp_budget : nullptr);
        }
    };
    int want = options.threads > 0 ? options.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    want = std::max(1, std::min<int>(want, static_cast<int>(sets.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < want; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    size_t best = sets.size();
    bool all_optimal = true;
    for (size_t b = 0; b < sets.size(); ++b) {
        if (branch[b].status == SolveStatus::BudgetExhausted) r.budget_exhausted = true;
        if (branch[b].status != SolveStatus::Optimal) all_optimal = false;
        if (branch[b].plan.actions.empty() && inst.num_objects() > 0) continue;
        if (best == sets.size() || branch[b].distance < branch[best].distance - 1e-9) best = b;
    }
    if (best == sets.size()) throw std::runtime_error("scheduling found no plan within budget");

    r.plan = branch[best].plan;
    r.buffered_ids = to_ids(inst, sets[best].vertices);
    r.branches_explored = static_cast<int>(sets.size());
    bool grasps_certified = true;
    for (const auto& s : sets) grasps_certified = grasps_certified && s.certified_optimal;
    r.optimal_grasps = grasps_certified;
    r.optimal_distance = grasps_certified && all_optimal && !truncated;
    if (truncated) r.budget_exhausted = true;
    finish(r, inst, clock);
    return r;
}

SolveReport solve_greedy(const Instance& inst) {
    Stopwatch clock;
    SolveReport r;
    r.method = "greedy";
    DependencyDigraph dep = build_dependency_graph(inst);
    r.dependency_arcs = dep.num_arcs();
    r.plan = greedy_plan(inst);
    finish(r, inst, clock);
    return r;
}

SolveReport solve_random(const Instance& inst, std::uint64_t seed) {
    Stopwatch clock;
    SolveReport r;
    r.method = "random";
    r.plan = random_plan(inst, seed);
    r.optimal_grasps = true;
    finish(r, inst, clock);
    return r;
}

SolveReport solve_auto(const Instance& inst, const IlpEngine& engine,
                       const SolveOptions& options) {
    const int n = inst.num_objects();
    if (starts_goals_disjoint(inst)) {
        bool exact_fits = inst.labeled ? n + 1 <= 16 : n <= 12;
        return solve_no_overlap(inst, exact_fits ? TourMode::Exact : TourMode::Heuristic);
    }
    if (!inst.labeled) {
        throw std::invalid_argument("overlapping instances must be labeled");
    }
    if (n <= 6) return solve_fvs_complete(inst, engine, options);
    return solve_greedy(inst);
}

std::string report_to_json(const SolveReport& report) {
    nlohmann::json j;
    j["method"] = report.method;
    j["plan"] = nlohmann::json::parse(plan_to_json(report.plan));
    j["cost"] = {{"grasps", report.cost.grasps},
                 {"distance", report.cost.distance},
                 {"total", report.cost.total}};
    j["optimal_grasps"] = report.optimal_grasps;
    j["optimal_distance"] = report.optimal_distance;
    j["budget_exhausted"] = report.budget_exhausted;
    j["buffered_ids"] = report.buffered_ids;
    j["dependency_arcs"] = report.dependency_arcs;
    j["fvs_size"] = report.fvs_size;
    j["branches_explored"] = report.branches_explored;
    return j.dump(2) + "\n";
}

}  // namespace tabletop
