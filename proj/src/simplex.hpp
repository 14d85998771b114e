#ifndef TABLETOP_SRC_SIMPLEX_HPP
#define TABLETOP_SRC_SIMPLEX_HPP

#include <vector>

#include "tabletop/ilp.hpp"

namespace tabletop::detail {

/// Continuous relaxation subproblem: minimize cost over box-constrained
/// variables subject to linear rows. Bounds are finite (0/1 boxes, possibly
/// pinched by branching).
struct LpProblem {
    int nvars = 0;
    std::vector<double> cost;
    std::vector<double> lo, hi;
    std::vector<LinearConstraint> rows;
};

struct LpResult {
    enum class Status { Optimal, Infeasible, Stalled };
    Status status = Status::Stalled;
    double objective = 0.0;
    std::vector<double> x;
};

/// Dense two-phase simplex with bounded variables. Returns Stalled instead
/// of looping when the pivot budget runs out; callers fall back to weaker
/// bounds, so Stalled is safe, just unhelpful.
LpResult solve_lp(const LpProblem& p);

}  // namespace tabletop::detail

#endif
