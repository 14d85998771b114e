#ifndef TABLETOP_ILP_HPP
#define TABLETOP_ILP_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tabletop {

enum class Relation { LessEq, GreaterEq, Equal };
enum class Sense { Minimize, Maximize };

struct LinearTerm {
    int var = 0;
    double coef = 0.0;
};

struct LinearConstraint {
    std::vector<LinearTerm> terms;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
    std::string name;
};

/// 0/1 integer program. All variables are binary; the objective may carry a
/// constant offset (reported in objective values, dropped by no solver).
struct IlpModel {
    Sense sense = Sense::Minimize;
    std::vector<LinearTerm> objective;
    double objective_constant = 0.0;
    std::vector<LinearConstraint> constraints;
    std::vector<std::string> var_names;

    int num_vars() const { return static_cast<int>(var_names.size()); }
    int add_var(const std::string& name);
    void add_constraint(std::vector<LinearTerm> terms, Relation rel, double rhs,
                        std::string name = "");
    void set_objective_coef(int var, double coef);  ///< accumulates onto existing coefficient

    /// Objective value of a full assignment, constant included.
    double objective_value(const std::vector<std::uint8_t>& assignment) const;
    /// Exact feasibility check with absolute tolerance 1e-6 per row.
    bool feasible(const std::vector<std::uint8_t>& assignment) const;
};

enum class SolveStatus { Optimal, Infeasible, BudgetExhausted };

struct IlpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<std::uint8_t> assignment;  ///< empty when Infeasible
    double objective = 0.0;
    long nodes_explored = 0;
};

/// Search budget. Node limits keep results deterministic; the wall-clock
/// limit is a safety net for interactive use.
struct SolveBudget {
    long max_nodes = 50'000'000;
    double max_seconds = std::numeric_limits<double>::infinity();
};

/// Branch-and-bound solver for binary programs, sized for models up to a
/// few thousand variables. Bounds come from an LP relaxation solved by a
/// built-in simplex with lazy inequality activation, with constraint
/// propagation as the fallback when the relaxation stalls or the model is
/// too large. Branching is deterministic: most fractional variable first
/// (lowest index on ties), nearest integer value explored first, so
/// identical model and budget always reproduce the same solution.
class IlpEngine {
public:
    SolveBudget default_budget;
    /// When non-empty: path of an external solver executable invoked as
    /// `exe model.lp solution.txt`; its answer is verified against the
    /// model and the internal solver takes over if anything is off.
    std::string external_solver;

    IlpSolution solve(const IlpModel& model,
                      std::optional<SolveBudget> budget = std::nullopt,
                      const std::vector<std::uint8_t>* warm_start = nullptr) const;

    /// Every optimal assignment, deduplicated by the pattern over
    /// `projection` (all variables when empty). Found by re-solving with an
    /// exclusion cut per discovered pattern until the objective degrades.
    /// Solutions appear in discovery order. `truncated`, when given, is set
    /// if the budget or `max_solutions` stopped the enumeration early.
    std::vector<IlpSolution> solve_all_optima(const IlpModel& model,
                                              const std::vector<int>& projection = {},
                                              std::optional<SolveBudget> budget = std::nullopt,
                                              int max_solutions = 10000,
                                              bool* truncated = nullptr) const;
};

/// CPLEX-style LP text for the model; parse_lp_format inverts it exactly
/// (same variable order, coefficients round-tripped via shortest-exact
/// formatting). An empty model yields just the headers.
std::string to_lp_format(const IlpModel& model, const std::string& comment = "");
IlpModel parse_lp_format(const std::string& text);

}  // namespace tabletop

#endif
