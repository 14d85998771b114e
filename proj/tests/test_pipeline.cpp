#include <algorithm>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tabletop/depgraph.hpp"
#include "tabletop/fvs.hpp"
#include "tabletop/mindist.hpp"
#include "tabletop/pipeline.hpp"

using namespace tabletop;

TEST_SUITE("pipeline") {

TEST_CASE("method names round trip") {
    for (SolveMethod m : {SolveMethod::Auto, SolveMethod::TspExact, SolveMethod::TspHeuristic,
                          SolveMethod::FvsSingle, SolveMethod::FvsComplete, SolveMethod::Greedy,
                          SolveMethod::Random}) {
        auto back = method_from_name(method_name(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(method_from_name("simulated-annealing").has_value());
}

TEST_CASE("tour pipeline matches the permutation oracle") {
    for (std::uint64_t seed = 5; seed <= 12; ++seed) {
        Instance inst = generate_no_overlap(5, seed);
        SolveReport r = solve_no_overlap(inst, TourMode::Exact);
        CHECK(r.method == "tsp-exact");
        CHECK(r.optimal_grasps);
        CHECK(r.optimal_distance);
        CHECK(r.cost.grasps == 5);
        CHECK(r.dependency_arcs == 0);
        CHECK(r.fvs_size == 0);
        CHECK(r.buffered_ids.empty());
        CHECK(r.cost.distance == doctest::Approx(oracle::best_labeled_distance(inst)).epsilon(1e-9));

        SolveReport h = solve_no_overlap(inst, TourMode::Heuristic);
        CHECK(h.method == "tsp-heur");
        CHECK_FALSE(h.optimal_distance);
        CHECK(h.cost.distance >= r.cost.distance - 1e-9);
    }
}

TEST_CASE("single-set pipeline on the swap fixture") {
    Instance inst = oracle::swap_instance();
    IlpEngine engine;
    SolveReport r = solve_fvs_single(inst, engine);
    CHECK(r.method == "fvs-single");
    CHECK(r.cost.grasps == 3);  // n + |B|
    CHECK(r.fvs_size == 1);
    CHECK(r.buffered_ids.size() == 1);
    CHECK(r.optimal_grasps);
    // Another minimum buffered set might travel less, so no distance claim.
    CHECK_FALSE(r.optimal_distance);
    CHECK(r.dependency_arcs == 2);
    CHECK(r.branches_explored == 1);
}

TEST_CASE("complete pipeline is the minimum over buffered-set branches") {
    Instance inst = oracle::swap_instance();
    IlpEngine engine;

    DependencyDigraph dep = build_dependency_graph(inst);
    std::vector<FeedbackVertexSet> sets = enumerate_optimal_fvs(dep, engine);
    REQUIRE(sets.size() == 2);  // {0} and {1}
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sets) {
        MindistResult m = solve_mindist(inst, s.vertices, engine);
        REQUIRE(m.status == SolveStatus::Optimal);
        best = std::min(best, m.distance);
    }

    SolveReport r = solve_fvs_complete(inst, engine);
    CHECK(r.method == "fvs-complete");
    CHECK(r.branches_explored == 2);
    CHECK(r.optimal_grasps);
    CHECK(r.optimal_distance);
    CHECK(r.cost.grasps == 3);
    CHECK(r.cost.distance == doctest::Approx(best).epsilon(1e-12));
    CHECK(r.buffered_ids == std::vector<int>{0});  // the cheaper branch stashes object 0
    CHECK(r.cost.distance == doctest::Approx(oracle::best_schedule_distance(inst, {0})));
}

TEST_CASE("complete pipeline is thread-count invariant") {
    IlpEngine engine;
    for (std::uint64_t seed : {3u, 7u}) {
        Instance inst = generate_with_overlap(4, 1.5, 2, seed, 2);
        SolveOptions one;
        one.threads = 1;
        SolveOptions four;
        four.threads = 4;
        SolveReport a = solve_fvs_complete(inst, engine, one);
        SolveReport b = solve_fvs_complete(inst, engine, four);
        CHECK(report_to_json(a) == report_to_json(b));
    }
}

TEST_CASE("auto picks a method by instance shape") {
    IlpEngine engine;

    Instance small = generate_no_overlap(4, 2);
    CHECK(solve_auto(small, engine).method == "tsp-exact");

    Instance big = generate_no_overlap(20, 2);
    CHECK(solve_auto(big, engine).method == "tsp-heur");

    Instance swap = oracle::swap_instance();
    CHECK(solve_auto(swap, engine).method == "fvs-complete");

    Instance crowded = generate_with_overlap(7, 1.0, 2, 11);
    if (starts_goals_disjoint(crowded)) {
        // Degenerate draw; arcs were planned, so this should not happen.
        FAIL("overlap generator produced a disjoint instance");
    }
    CHECK(solve_auto(crowded, engine).method == "greedy");
}

TEST_CASE("baseline wrappers produce executable plans") {
    Instance inst = generate_no_overlap(5, 44);
    SolveReport g = solve_greedy(inst);
    CHECK(g.method == "greedy");
    CHECK(g.cost.grasps == 5);

    SolveReport r = solve_random(inst, 9);
    CHECK(r.method == "random");
    CHECK(r.cost.grasps == 5);
    CHECK(r.optimal_grasps);
    CHECK(r.cost.distance >= solve_no_overlap(inst, TourMode::Exact).cost.distance - 1e-9);
}

TEST_CASE("report JSON is deterministic and untimed") {
    Instance inst = oracle::swap_instance();
    IlpEngine engine;
    std::string a = report_to_json(solve_fvs_complete(inst, engine));
    std::string b = report_to_json(solve_fvs_complete(inst, engine));
    CHECK(a == b);
    CHECK(a.find("seconds") == std::string::npos);
    CHECK(a.find("\"method\"") != std::string::npos);
    CHECK(a.find("\"plan\"") != std::string::npos);
}

TEST_CASE("with nothing overlapping, scheduling and touring agree") {
    IlpEngine engine;
    for (std::uint64_t seed = 70; seed <= 75; ++seed) {
        Instance inst = generate_no_overlap(4, seed);
        inst.buffers.clear();  // no buffers needed when the graph is acyclic
        SolveReport tour = solve_no_overlap(inst, TourMode::Exact);
        SolveReport sched = solve_fvs_single(inst, engine);
        CHECK(sched.fvs_size == 0);
        CHECK(sched.optimal_grasps);
        CHECK(sched.optimal_distance);
        CHECK(sched.cost.grasps == tour.cost.grasps);
        CHECK(sched.cost.distance == doctest::Approx(tour.cost.distance).epsilon(1e-6));
    }
}

}  // TEST_SUITE
