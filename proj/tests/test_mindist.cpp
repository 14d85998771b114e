#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tabletop/depgraph.hpp"
#include "tabletop/fvs.hpp"
#include "tabletop/mindist.hpp"
#include "tabletop/util.hpp"

using namespace tabletop;

TEST_SUITE("mindist") {

TEST_CASE("time-expanded model size for two objects, one buffered") {
    Instance inst = oracle::swap_instance();
    TimeExpandedModel m = build_mindist_model(inst, {0});
    CHECK(m.n == 2);
    CHECK(m.p == 1);
    CHECK(m.horizon == 3);
    CHECK(m.buffered == std::vector<int>{0});

    // Occupancy variables exist for the interior steps t = 1..T-1 only:
    // per object one start and one goal indicator, and per buffered object
    // one indicator per buffer slot.
    REQUIRE(m.start_occ.size() == 2);
    REQUIRE(m.goal_occ.size() == 2);
    REQUIRE(m.buffer_occ.size() == 1);
    int node_vars = 0;
    for (const auto& row : m.start_occ) {
        CHECK(row.size() == 2);
        node_vars += static_cast<int>(row.size());
    }
    for (const auto& row : m.goal_occ) {
        CHECK(row.size() == 2);
        node_vars += static_cast<int>(row.size());
    }
    for (const auto& slots : m.buffer_occ) {
        CHECK(slots.size() == 1);  // p slots, not all instance buffers
        for (const auto& steps : slots) {
            CHECK(steps.size() == 2);
            node_vars += static_cast<int>(steps.size());
        }
    }
    CHECK(node_vars == 10);
    CHECK(m.edges.size() == 29);
    CHECK(m.model.num_vars() == 39);

    // Every edge variable id is distinct and covered by the model.
    std::vector<int> ids;
    for (const EdgeVar& e : m.edges) ids.push_back(e.var);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(ids.front() >= 0);
    CHECK(ids.back() < m.model.num_vars());
}

TEST_CASE("model construction rejects bad input") {
    Instance inst = oracle::swap_instance();

    // {} leaves the 2-cycle unbroken.
    CHECK_THROWS_AS(build_mindist_model(inst, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_mindist_model(inst, {5}), std::invalid_argument);
    // Two buffered objects but only one buffer spot.
    CHECK_THROWS_AS(build_mindist_model(inst, {0, 1}), std::invalid_argument);

    Instance unl = inst;
    unl.labeled = false;
    CHECK_THROWS_AS(build_mindist_model(unl, {0}), std::invalid_argument);

    Instance empty = inst;
    empty.objects.clear();
    CHECK_THROWS_AS(build_mindist_model(empty, {}), std::invalid_argument);
}

TEST_CASE("the swap fixture solves to the published three-action schedule") {
    Instance inst = oracle::swap_instance();
    IlpEngine engine;

    MindistResult r = solve_mindist(inst, {0}, engine);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(replay_plan(inst, r.plan).empty());
    REQUIRE(r.plan.actions.size() == 3);
    CHECK(r.plan.grasp_count() == 3);  // n + p

    // Stash object 0, place object 1, retrieve object 0.
    CHECK(r.plan.actions[0].object_id == 0);
    CHECK(r.plan.actions[1].object_id == 1);
    CHECK(r.plan.actions[2].object_id == 0);
    CHECK(r.plan.actions[0].place.x == doctest::Approx(inst.buffers[0].x));
    CHECK(r.plan.actions[0].place.y == doctest::Approx(inst.buffers[0].y));
    CHECK(r.plan.actions[2].place.x == doctest::Approx(inst.objects[0].goal.x));

    double want = oracle::best_schedule_distance(inst, {0});
    REQUIRE(want >= 0.0);
    CHECK(r.distance == doctest::Approx(want).epsilon(1e-9));

    // The other buffered choice is strictly worse on this geometry.
    MindistResult alt = solve_mindist(inst, {1}, engine);
    REQUIRE(alt.status == SolveStatus::Optimal);
    double alt_want = oracle::best_schedule_distance(inst, {1});
    CHECK(alt.distance == doctest::Approx(alt_want).epsilon(1e-9));
    CHECK(alt.distance > r.distance + 1e-6);
}

TEST_CASE("random overlapping instances match the schedule oracle") {
    IlpEngine engine;
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 14; ++seed) {
        int n = 2 + static_cast<int>(seed % 2u);  // 2..3
        Instance inst = generate_with_overlap(n, 1.5, 2, seed, 2);
        DependencyDigraph dep = build_dependency_graph(inst);
        FeedbackVertexSet fvs = fvs_brute_force(dep);
        if (fvs.size() > 1) continue;  // keep the oracle exhaustive search small

        MindistResult r = solve_mindist(inst, fvs.vertices, engine);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(replay_plan(inst, r.plan).empty());
        CHECK(r.plan.grasp_count() == n + fvs.size());

        double want = oracle::best_schedule_distance(inst, fvs.vertices);
        REQUIRE(want >= 0.0);
        CHECK(r.distance == doctest::Approx(want).epsilon(1e-9));
        ++solved;
    }
    CHECK(solved >= 8);
}

TEST_CASE("an exhausted node budget still returns the verified seed schedule") {
    Instance inst = oracle::swap_instance();
    IlpEngine engine;
    SolveBudget tiny;
    tiny.max_nodes = 0;
    MindistResult r = solve_mindist(inst, {0}, engine, &tiny);
    CHECK(r.status == SolveStatus::BudgetExhausted);
    // The warm-start incumbent decodes to an executable plan.
    CHECK_FALSE(r.plan.actions.empty());
    CHECK(replay_plan(inst, r.plan).empty());
    CHECK(r.plan.grasp_count() == 3);
    CHECK(r.distance == doctest::Approx(plan_cost(inst, r.plan).distance));

    // And it can never beat the true optimum.
    MindistResult full = solve_mindist(inst, {0}, engine);
    CHECK(r.distance >= full.distance - 1e-9);
}

TEST_CASE("no objects means an empty optimal plan") {
    Instance inst = oracle::swap_instance();
    inst.objects.clear();
    IlpEngine engine;
    MindistResult r = solve_mindist(inst, {}, engine);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.plan.actions.empty());
    CHECK(r.plan.d_f == doctest::Approx(dist(inst.rest_start, inst.rest_goal)));
    CHECK(r.distance == doctest::Approx(r.plan.d_f));
}

TEST_CASE("greedy baseline executes and stashes through buffers") {
    Instance swap = oracle::swap_instance();
    ActionPlan plan = greedy_plan(swap);
    CHECK(replay_plan(swap, plan).empty());
    CHECK(plan.grasp_count() == 3);  // stash the blocker, place, retrieve
    CHECK_NOTHROW(plan_cost(swap, plan));

    // Greedy works down the id order, so it parks o1 while clearing o0's
    // goal and still needs a second slot for o2: one buffer is not enough.
    Instance chain = oracle::chain_instance();
    CHECK_THROWS_AS(greedy_plan(chain), std::runtime_error);
    chain.buffers.push_back({7.0, 3.0});
    ActionPlan cp = greedy_plan(chain);
    CHECK(replay_plan(chain, cp).empty());
    CHECK(cp.grasp_count() == 5);

    Instance stuck = swap;
    stuck.buffers.clear();
    CHECK_THROWS_AS(greedy_plan(stuck), std::runtime_error);
}

TEST_CASE("random baseline is deterministic and valid") {
    Instance inst = generate_no_overlap(6, 17);
    ActionPlan a = random_plan(inst, 99);
    ActionPlan b = random_plan(inst, 99);
    CHECK(plan_to_json(a) == plan_to_json(b));
    CHECK(replay_plan(inst, a).empty());
    CHECK(plan_cost(inst, a).grasps == 6);

    ActionPlan c = random_plan(inst, 100);
    CHECK(replay_plan(inst, c).empty());

    Instance unl = inst;
    unl.labeled = false;
    ActionPlan u = random_plan(unl, 3);
    CHECK(replay_plan(unl, u).empty());

    CHECK_THROWS_AS(random_plan(oracle::swap_instance(), 1), std::invalid_argument);
}

TEST_CASE("solving twice gives bit-identical results") {
    Instance inst = oracle::swap_instance();
    IlpEngine engine;
    MindistResult a = solve_mindist(inst, {0}, engine);
    MindistResult b = solve_mindist(inst, {0}, engine);
    CHECK(a.distance == b.distance);
    CHECK(a.nodes_explored == b.nodes_explored);
    CHECK(plan_to_json(a.plan) == plan_to_json(b.plan));
}

}  // TEST_SUITE
