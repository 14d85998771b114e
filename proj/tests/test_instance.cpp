#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tabletop/depgraph.hpp"
#include "tabletop/instance.hpp"
#include "tabletop/util.hpp"

using namespace tabletop;

TEST_SUITE("instance") {

TEST_CASE("disc overlap is strict and tangency does not count") {
    CHECK_FALSE(discs_overlap({0, 0}, 1.0, {3, 0}, 1.0));
    CHECK(discs_overlap({0, 0}, 1.0, {1.5, 0}, 1.0));
    CHECK_FALSE(discs_overlap({0, 0}, 1.0, {2, 0}, 1.0));
    // Interpenetration below the tolerance still counts as disjoint.
    CHECK_FALSE(discs_overlap({0, 0}, 1.0, {2.0 - 0.5e-9, 0}, 1.0));
    CHECK(discs_overlap({0, 0}, 1.0, {2.0 - 3e-9, 0}, 1.0));
}

TEST_CASE("plan_cost prices a single collinear action") {
    Instance inst;
    inst.workspace = {-1, -1, 2, 2};
    inst.rest_start = {0, 0};
    inst.rest_goal = {1, 0};
    inst.objects = {{0, 0.25, {0, 0}, {1, 0}}};

    ActionPlan plan;
    plan.actions = {{0, {0, 0}, {1, 0}, 0.0, 1.0}};
    plan.d_f = 0.0;

    CostBreakdown cost = plan_cost(inst, plan);
    CHECK(cost.grasps == 1);
    CHECK(cost.distance == doctest::Approx(1.0));
    CHECK(cost.total == doctest::Approx(3.0));  // grasp + release + travel
}

TEST_CASE("plan_cost of the empty plan is the rest-to-rest hop") {
    Instance inst;
    inst.workspace = {-1, -1, 2, 2};
    inst.rest_start = {0, 0};
    inst.rest_goal = {0, 0};

    CostBreakdown cost = plan_cost(inst, {});
    CHECK(cost.grasps == 0);
    CHECK(cost.total == doctest::Approx(0.0));

    inst.rest_goal = {3, 4};
    ActionPlan plan;
    plan.d_f = 5.0;
    CHECK(plan_cost(inst, plan).distance == doctest::Approx(5.0));
}

TEST_CASE("plan_cost rejects inconsistent distance fields") {
    Instance inst;
    inst.workspace = {-1, -1, 2, 2};
    inst.rest_start = {0, 0};
    inst.rest_goal = {1, 0};
    inst.objects = {{0, 0.25, {0, 0}, {1, 0}}};

    ActionPlan plan;
    plan.actions = {{0, {0, 0}, {1, 0}, 0.5, 1.0}};  // d_e should be 0
    plan.d_f = 0.0;
    CHECK_THROWS_AS(plan_cost(inst, plan), std::invalid_argument);

    plan.actions[0].d_e = 0.0;
    plan.actions[0].d_l = 2.0;  // loaded leg is 1
    CHECK_THROWS_AS(plan_cost(inst, plan), std::invalid_argument);

    plan.actions[0].d_l = 1.0;
    plan.d_f = 1.0;  // last release already at rest_goal
    CHECK_THROWS_AS(plan_cost(inst, plan), std::invalid_argument);

    plan.d_f = 0.0;
    plan.actions[0].object_id = 7;
    CHECK_THROWS_AS(plan_cost(inst, plan), std::invalid_argument);
}

TEST_CASE("plan distance bookkeeping matches an independent recomputation") {
    Instance inst = generate_no_overlap(5, 99);
    // Build the ascending-id direct plan by hand.
    ActionPlan plan;
    Pose hand = inst.rest_start;
    for (const ObjectSpec& o : inst.objects) {
        Action a;
        a.object_id = o.id;
        a.pick = o.start;
        a.place = o.goal;
        a.d_e = dist(hand, o.start);
        a.d_l = dist(o.start, o.goal);
        plan.actions.push_back(a);
        hand = o.goal;
    }
    plan.d_f = dist(hand, inst.rest_goal);

    CostBreakdown cost = plan_cost(inst, plan);
    double expect = 0.0;
    Pose cursor = inst.rest_start;
    for (const ObjectSpec& o : inst.objects) {
        expect += std::hypot(cursor.x - o.start.x, cursor.y - o.start.y);
        expect += std::hypot(o.start.x - o.goal.x, o.start.y - o.goal.y);
        cursor = o.goal;
    }
    expect += std::hypot(cursor.x - inst.rest_goal.x, cursor.y - inst.rest_goal.y);
    CHECK(cost.distance == doctest::Approx(expect).epsilon(1e-12));
    CHECK(cost.distance == doctest::Approx(plan.distance_total()).epsilon(1e-12));
    CHECK(cost.total == doctest::Approx(5 * 2.0 + expect).epsilon(1e-12));
}

TEST_CASE("validate flags the documented violations") {
    Instance inst;
    inst.workspace = {0, 0, 10, 10};
    inst.rest_start = {5, 5};
    inst.rest_goal = {5, 5};
    inst.objects = {
        {0, 0.5, {1, 1}, {3, 3}},
        {1, 0.5, {1.2, 1}, {6, 6}},  // start overlaps start of object 0
    };
    auto notes = validate(inst);
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].find("start") != std::string::npos);

    inst.objects[1].start = {8, 8};
    CHECK(validate(inst).empty());

    inst.objects[1].goal = {3.1, 3};  // goal collision
    CHECK_FALSE(validate(inst).empty());
    inst.objects[1].goal = {6, 6};

    inst.buffers.push_back({6, 6});  // on a goal
    CHECK_FALSE(validate(inst).empty());
    inst.buffers.clear();

    inst.objects[1].id = 0;  // duplicate id
    CHECK_FALSE(validate(inst).empty());
    inst.objects[1].id = 1;

    inst.objects[0].radius = 0.0;
    CHECK_FALSE(validate(inst).empty());
    inst.objects[0].radius = 0.5;

    inst.rest_start = {11, 5};  // outside the workspace
    CHECK_FALSE(validate(inst).empty());
}

TEST_CASE("replay_plan follows the physical rules") {
    Instance inst = oracle::swap_instance();

    ActionPlan plan;
    Pose buffer = inst.buffers[0];
    Pose hand = inst.rest_start;
    auto push = [&](int id, Pose pick, Pose place) {
        Action a{id, pick, place, dist(hand, pick), dist(pick, place)};
        plan.actions.push_back(a);
        hand = place;
    };
    push(0, inst.objects[0].start, buffer);
    push(1, inst.objects[1].start, inst.objects[1].goal);
    push(0, buffer, inst.objects[0].goal);
    plan.d_f = dist(hand, inst.rest_goal);
    CHECK(replay_plan(inst, plan).empty());

    // Placing object 0 directly first would land on object 1's start.
    ActionPlan bad;
    hand = inst.rest_start;
    plan.actions.clear();
    {
        Action a{0, inst.objects[0].start, inst.objects[0].goal,
                 dist(hand, inst.objects[0].start),
                 dist(inst.objects[0].start, inst.objects[0].goal)};
        bad.actions.push_back(a);
    }
    bad.d_f = dist(inst.objects[0].goal, inst.rest_goal);
    CHECK_FALSE(replay_plan(inst, bad).empty());

    // Picking from a pose the object does not occupy.
    ActionPlan wrong_pick;
    {
        Action a{1, {0.5, 0.5}, inst.objects[1].goal, 0.0, 0.0};
        a.d_e = dist(inst.rest_start, a.pick);
        a.d_l = dist(a.pick, a.place);
        wrong_pick.actions.push_back(a);
    }
    wrong_pick.d_f = dist(inst.objects[1].goal, inst.rest_goal);
    CHECK_FALSE(replay_plan(inst, wrong_pick).empty());

    // An empty plan leaves both objects off their goals.
    ActionPlan nothing;
    nothing.d_f = dist(inst.rest_start, inst.rest_goal);
    CHECK_FALSE(replay_plan(inst, nothing).empty());
}

TEST_CASE("generate_no_overlap produces disjoint, valid, reproducible instances") {
    for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
        Instance inst = generate_no_overlap(8, seed);
        CHECK(inst.num_objects() == 8);
        CHECK(inst.labeled);
        CHECK(inst.buffers.empty());
        CHECK(validate(inst).empty());
        CHECK(starts_goals_disjoint(inst));

        // All 2n discs mutually disjoint, by the definition rather than the
        // library overlap helper.
        std::vector<Pose> discs;
        for (const ObjectSpec& o : inst.objects) {
            discs.push_back(o.start);
            discs.push_back(o.goal);
        }
        for (size_t a = 0; a < discs.size(); ++a) {
            for (size_t b = a + 1; b < discs.size(); ++b) {
                double d = std::hypot(discs[a].x - discs[b].x, discs[a].y - discs[b].y);
                CHECK(d >= 1.0 - 1e-9);  // radius 0.5 each
            }
        }
    }
    CHECK(instance_to_json(generate_no_overlap(6, 5)) ==
          instance_to_json(generate_no_overlap(6, 5)));
    CHECK(instance_to_json(generate_no_overlap(6, 5)) !=
          instance_to_json(generate_no_overlap(6, 6)));
}

TEST_CASE("generate_no_overlap exhausts its sampling budget on dense requests") {
    Rect tiny{0, 0, 2, 2};
    CHECK_THROWS_AS(generate_no_overlap(30, 1, 0.5, tiny), SamplingError);
}

TEST_CASE("generate_with_overlap realises the requested dependency degree") {
    for (std::uint64_t seed : {3ull, 11ull}) {
        Instance inst = generate_with_overlap(10, 2.0, 4, seed);
        CHECK(validate(inst).empty());
        CHECK(static_cast<int>(inst.buffers.size()) == 10);

        DependencyDigraph dep = build_dependency_graph(inst);
        double avg = 2.0 * dep.num_arcs() / 10.0;
        CHECK(avg >= 2.0 * 0.9 - 1e-9);
        CHECK(avg <= 2.0 * 1.1 + 1e-9);
        for (int v = 0; v < dep.n; ++v) {
            CHECK(static_cast<int>(dep.out_adj[v].size()) <= 4);
            CHECK(static_cast<int>(dep.in_adj[v].size()) <= 4);
        }
    }
    CHECK(instance_to_json(generate_with_overlap(6, 2.0, 3, 9)) ==
          instance_to_json(generate_with_overlap(6, 2.0, 3, 9)));
}

TEST_CASE("instance JSON round trip is exact") {
    Instance inst = generate_with_overlap(5, 2.0, 4, 17);
    inst.labeled = true;
    std::string text = instance_to_json(inst);
    Instance back = instance_from_json(text);
    CHECK(instance_to_json(back) == text);
    CHECK(back.num_objects() == inst.num_objects());
    CHECK(back.rest_start == inst.rest_start);
    CHECK(back.buffers.size() == inst.buffers.size());

    CHECK_THROWS_AS(instance_from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(instance_from_json("not json"), std::invalid_argument);
}

TEST_CASE("plan JSON round trip is exact") {
    ActionPlan plan;
    plan.actions = {{0, {0, 0}, {1, 2}, 0.5, std::sqrt(5.0)}, {3, {1, 1}, {4, 4}, 1.0, 2.5}};
    plan.d_f = 0.25;
    std::string text = plan_to_json(plan);
    ActionPlan back = plan_from_json(text);
    CHECK(plan_to_json(back) == text);
    CHECK(back.actions.size() == 2);
    CHECK(back.actions[1].object_id == 3);
    CHECK(back.d_f == plan.d_f);
}

TEST_CASE("deterministic rng stream is platform-pinned") {
    Rng rng(12345);
    // First few draws frozen so any platform drift in the mapping shows up.
    CHECK(rng.next() == 6597103971274460346ull);
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    Rng again(12345);
    CHECK(again.next() == 6597103971274460346ull);

    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
    CHECK(mix_seed(2, 2) != mix_seed(1, 2));
}

}  // TEST_SUITE
