#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tabletop/ilp.hpp"
#include "tabletop/util.hpp"

using namespace tabletop;

namespace {

/// Random scrappy model: small integer coefficients, mixed relations.
IlpModel random_model(int nvars, int nrows, std::uint64_t seed) {
    Rng rng(seed);
    IlpModel m;
    for (int v = 0; v < nvars; ++v) {
        int var = m.add_var("x" + std::to_string(v));
        m.set_objective_coef(var, static_cast<double>(rng.below(11) - 5));
    }
    m.sense = rng.below(2) == 0 ? Sense::Minimize : Sense::Maximize;
    for (int r = 0; r < nrows; ++r) {
        std::vector<LinearTerm> terms;
        for (int v = 0; v < nvars; ++v) {
            int c = rng.below(7) - 3;
            if (c != 0) terms.push_back({v, static_cast<double>(c)});
        }
        if (terms.empty()) terms.push_back({rng.below(nvars), 1.0});
        Relation rel = static_cast<Relation>(rng.below(3));
        double rhs = static_cast<double>(rng.below(9) - 3);
        m.add_constraint(std::move(terms), rel, rhs);
    }
    return m;
}

}  // namespace

TEST_SUITE("ilp") {

TEST_CASE("regression: ge-rows satisfied at zero must not corrupt the basis") {
    // Maximize v0+v1+v2 with the cycle-cover row and two exclusion cuts;
    // both cuts hold at the origin, which once broke the simplex start.
    IlpModel m;
    for (int i = 0; i < 3; ++i) {
        int v = m.add_var("v" + std::to_string(i));
        m.set_objective_coef(v, 1.0);
    }
    m.sense = Sense::Maximize;
    m.add_constraint({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Relation::LessEq, 2.0);
    m.add_constraint({{0, -1.0}, {1, -1.0}, {2, 1.0}}, Relation::GreaterEq, -1.0);
    m.add_constraint({{0, -1.0}, {1, 1.0}, {2, -1.0}}, Relation::GreaterEq, -1.0);

    IlpEngine engine;
    IlpSolution sol = engine.solve(m);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(2.0));
    // Of the three two-hot points only {0,1,1} survives both cuts.
    CHECK(sol.assignment == std::vector<std::uint8_t>{0, 1, 1});
    CHECK(engine.solve_all_optima(m).size() == 1);

    // Without the cuts every two-hot point is optimal; enumerating them
    // adds exactly such ge-rows internally, which is where the bug lived.
    IlpModel base;
    for (int i = 0; i < 3; ++i) {
        int v = base.add_var("v" + std::to_string(i));
        base.set_objective_coef(v, 1.0);
    }
    base.sense = Sense::Maximize;
    base.add_constraint({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Relation::LessEq, 2.0);
    auto all = engine.solve_all_optima(base);
    REQUIRE(all.size() == 3);
    for (const auto& s : all) {
        CHECK(s.assignment[0] + s.assignment[1] + s.assignment[2] == 2);
    }
}

TEST_CASE("regression: equality rows satisfied at zero still seed a basis") {
    // Flow-shaped equalities that hold at the all-zero point crashed the
    // tableau setup before equality rows were granted artificials.
    IlpModel m;
    for (int i = 0; i < 4; ++i) m.add_var("f" + std::to_string(i));
    m.set_objective_coef(0, 1.0);
    m.set_objective_coef(2, 3.0);
    m.set_objective_coef(3, 2.0);
    m.add_constraint({{0, 1.0}, {1, -1.0}}, Relation::Equal, 0.0);
    m.add_constraint({{1, 1.0}, {2, -1.0}}, Relation::Equal, 0.0);
    m.add_constraint({{0, 1.0}, {3, 1.0}}, Relation::GreaterEq, 1.0);
    IlpEngine engine;
    IlpSolution sol = engine.solve(m);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(2.0));  // f3 alone beats the forced f0-f1-f2 chain
}

TEST_CASE("random models match the exhaustive reference") {
    IlpEngine engine;
    int feasible_seen = 0;
    int infeasible_seen = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        int nvars = 4 + static_cast<int>(seed % 7u);
        int nrows = 3 + static_cast<int>(seed % 5u);
        IlpModel m = random_model(nvars, nrows, seed);
        oracle::IlpReference ref = oracle::solve_ilp_exhaustive(m);
        IlpSolution sol = engine.solve(m);
        if (ref.feasible) {
            ++feasible_seen;
            REQUIRE(sol.status == SolveStatus::Optimal);
            CHECK(sol.objective == doctest::Approx(ref.objective).epsilon(1e-9));
            CHECK(m.feasible(sol.assignment));
        } else {
            ++infeasible_seen;
            CHECK(sol.status == SolveStatus::Infeasible);
        }
    }
    // The sweep must exercise both outcomes to mean anything.
    CHECK(feasible_seen > 10);
    CHECK(infeasible_seen > 5);
}

TEST_CASE("solve_all_optima finds every optimum pattern") {
    IlpEngine engine;
    for (std::uint64_t seed = 101; seed <= 130; ++seed) {
        IlpModel m = random_model(4 + static_cast<int>(seed % 4u), 3, seed);
        oracle::IlpReference ref = oracle::solve_ilp_exhaustive(m);
        auto all = engine.solve_all_optima(m);
        if (!ref.feasible) {
            CHECK(all.empty());
            continue;
        }
        CHECK(static_cast<long>(all.size()) == ref.optimum_count);
        for (const IlpSolution& s : all) {
            CHECK(m.feasible(s.assignment));
            CHECK(s.objective == doctest::Approx(ref.objective).epsilon(1e-9));
        }
    }
}

TEST_CASE("identical solves are bit-identical") {
    IlpModel m = random_model(8, 6, 77);
    IlpEngine engine;
    IlpSolution a = engine.solve(m);
    IlpSolution b = engine.solve(m);
    CHECK(a.status == b.status);
    CHECK(a.assignment == b.assignment);
    CHECK(a.objective == b.objective);
    CHECK(a.nodes_explored == b.nodes_explored);
}

TEST_CASE("a zero node budget returns the warm start untouched") {
    IlpModel m;
    for (int i = 0; i < 3; ++i) m.add_var("x" + std::to_string(i));
    for (int i = 0; i < 3; ++i) m.set_objective_coef(i, 1.0);
    m.add_constraint({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Relation::GreaterEq, 2.0);

    std::vector<std::uint8_t> warm = {1, 1, 1};
    IlpEngine engine;
    SolveBudget tiny;
    tiny.max_nodes = 0;
    IlpSolution sol = engine.solve(m, tiny, &warm);
    CHECK(sol.status == SolveStatus::BudgetExhausted);
    CHECK(sol.assignment == warm);

    // An infeasible warm start is rejected, leaving no incumbent.
    std::vector<std::uint8_t> bad = {1, 0, 0};
    IlpSolution none = engine.solve(m, tiny, &bad);
    CHECK(none.status == SolveStatus::BudgetExhausted);
    CHECK(none.assignment.empty());

    // With the default budget the same model closes at the true optimum.
    IlpSolution full = engine.solve(m, std::nullopt, &warm);
    CHECK(full.status == SolveStatus::Optimal);
    CHECK(full.objective == doctest::Approx(2.0));
}

TEST_CASE("objective constants ride along") {
    IlpModel m;
    m.add_var("x");
    m.set_objective_coef(0, 3.0);
    m.objective_constant = 10.0;
    m.add_constraint({{0, 1.0}}, Relation::GreaterEq, 1.0);
    IlpEngine engine;
    IlpSolution sol = engine.solve(m);
    CHECK(sol.objective == doctest::Approx(13.0));
}

TEST_CASE("lp text round trips exactly") {
    IlpModel m = random_model(6, 4, 5);
    m.constraints[0].name = "capacity";
    m.objective_constant = 2.5;
    std::string text = to_lp_format(m, "two line\ncomment");
    IlpModel back = parse_lp_format(text);

    CHECK(back.num_vars() == m.num_vars());
    CHECK(back.var_names == m.var_names);
    CHECK(back.sense == m.sense);
    CHECK(back.objective_constant == m.objective_constant);
    REQUIRE(back.constraints.size() == m.constraints.size());
    for (size_t i = 0; i < m.constraints.size(); ++i) {
        CHECK(back.constraints[i].rel == m.constraints[i].rel);
        CHECK(back.constraints[i].rhs == m.constraints[i].rhs);
        REQUIRE(back.constraints[i].terms.size() == m.constraints[i].terms.size());
        for (size_t t = 0; t < m.constraints[i].terms.size(); ++t) {
            CHECK(back.constraints[i].terms[t].var == m.constraints[i].terms[t].var);
            CHECK(back.constraints[i].terms[t].coef == m.constraints[i].terms[t].coef);
        }
    }
    // Serialization of the parse is byte-identical (comment aside).
    CHECK(to_lp_format(back) == to_lp_format(m));

    // Fractional coefficients survive the round trip bit-for-bit.
    IlpModel frac;
    frac.add_var("a");
    frac.add_var("b");
    frac.set_objective_coef(0, 0.1);
    frac.set_objective_coef(1, std::sqrt(2.0));
    frac.add_constraint({{0, 1.0 / 3.0}, {1, -2.125}}, Relation::LessEq, 0.7);
    IlpModel fback = parse_lp_format(to_lp_format(frac));
    CHECK(fback.objective[1].coef == std::sqrt(2.0));
    CHECK(fback.constraints[0].terms[0].coef == 1.0 / 3.0);
}

TEST_CASE("infeasible models are reported as such") {
    IlpModel m;
    m.add_var("x");
    m.add_var("y");
    m.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::GreaterEq, 3.0);  // max is 2
    IlpEngine engine;
    CHECK(engine.solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("feasibility tolerance scales with the row") {
    IlpModel m;
    m.add_var("x");
    m.add_constraint({{0, 1.0}}, Relation::LessEq, 1.0);
    CHECK(m.feasible({1}));
    CHECK(m.feasible({0}));
    m.add_constraint({{0, 1.0}}, Relation::GreaterEq, 1.0);
    CHECK(m.feasible({1}));
    CHECK_FALSE(m.feasible({0}));
}

}  // TEST_SUITE
