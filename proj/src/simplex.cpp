#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tabletop::detail {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-7;
constexpr double kFeasTol = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState { Basic, AtLo, AtHi };

/// Tableau simplex over structural + slack + artificial columns. The
/// tableau holds B^{-1}A and is updated by full row elimination on every
/// pivot; fine at the few-hundred-row scale this engine targets.
struct Tableau {
    int m = 0, ncols = 0;
    std::vector<double> a;      // m x ncols, row major
    std::vector<double> xb;     // basic values per row
    std::vector<int> basis;     // column basic in each row
    std::vector<VarState> state;
    std::vector<double> lo, hi, value;  // value meaningful for nonbasic cols
    std::vector<double> dj;     // reduced costs for current phase cost
    long degenerate_streak = 0;

    double& at(int r, int c) { return a[static_cast<size_t>(r) * static_cast<size_t>(ncols) + static_cast<size_t>(c)]; }
    double get(int r, int c) const { return a[static_cast<size_t>(r) * static_cast<size_t>(ncols) + static_cast<size_t>(c)]; }

    double var_value(int c) const {
        if (state[static_cast<size_t>(c)] == VarState::Basic) {
            for (int r = 0; r < m; ++r) {
                if (basis[static_cast<size_t>(r)] == c) return xb[static_cast<size_t>(r)];
            }
        }
        return value[static_cast<size_t>(c)];
    }

    void compute_reduced_costs(const std::vector<double>& cost) {
        dj.assign(static_cast<size_t>(ncols), 0.0);
        // dj = c - c_B^T * tableau, computed row by row.
        for (int c = 0; c < ncols; ++c) dj[static_cast<size_t>(c)] = cost[static_cast<size_t>(c)];
        for (int r = 0; r < m; ++r) {
            double cb = cost[static_cast<size_t>(basis[static_cast<size_t>(r)])];
            if (cb == 0.0) continue;
            const double* row = &a[static_cast<size_t>(r) * static_cast<size_t>(ncols)];
            for (int c = 0; c < ncols; ++c) dj[static_cast<size_t>(c)] -= cb * row[c];
        }
    }

    int pick_entering(bool bland) const {
        int best = -1;
        double best_score = kCostTol;
        for (int c = 0; c < ncols; ++c) {
            VarState s = state[static_cast<size_t>(c)];
            if (s == VarState::Basic) continue;
            if (lo[static_cast<size_t>(c)] == hi[static_cast<size_t>(c)]) continue;  // pinned
            double d = dj[static_cast<size_t>(c)];
            bool eligible = (s == VarState::AtLo && d < -kCostTol) || (s == VarState::AtHi && d > kCostTol);
            if (!eligible) continue;
            if (bland) return c;
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = c;
            }
        }
        return best;
    }

    enum class StepOutcome { Moved, Unbounded };

    StepOutcome step(int e) {
        double dir = state[static_cast<size_t>(e)] == VarState::AtLo ? 1.0 : -1.0;
        std::vector<double> col(static_cast<size_t>(m));
        for (int r = 0; r < m; ++r) col[static_cast<size_t>(r)] = get(r, e);

        double limit = hi[static_cast<size_t>(e)] - lo[static_cast<size_t>(e)];  // bound-flip span
        double best_t = limit;
        int leave_row = -1;
        for (int r = 0; r < m; ++r) {
            double rate = -col[static_cast<size_t>(r)] * dir;  // d(xb_r)/d(delta)
            int bv = basis[static_cast<size_t>(r)];
            double t;
            if (rate < -kPivotTol) {
                double room = std::max(0.0, xb[static_cast<size_t>(r)] - lo[static_cast<size_t>(bv)]);
                t = room / (-rate);
            } else if (rate > kPivotTol) {
                double room = std::max(0.0, hi[static_cast<size_t>(bv)] - xb[static_cast<size_t>(r)]);
                t = room / rate;
            } else {
                continue;
            }
            if (t < best_t - kPivotTol ||
                (t < best_t + kPivotTol && (leave_row < 0 || bv < basis[static_cast<size_t>(leave_row)]))) {
                best_t = t;
                leave_row = r;
            }
        }

        if (leave_row < 0 && !std::isfinite(best_t)) return StepOutcome::Unbounded;

        double delta = std::max(0.0, best_t);
        degenerate_streak = delta < kPivotTol ? degenerate_streak + 1 : 0;

        for (int r = 0; r < m; ++r) {
            xb[static_cast<size_t>(r)] -= col[static_cast<size_t>(r)] * dir * delta;
        }

        if (leave_row < 0) {
            // Bound flip: the entering variable crosses its box.
            state[static_cast<size_t>(e)] =
                state[static_cast<size_t>(e)] == VarState::AtLo ? VarState::AtHi : VarState::AtLo;
            value[static_cast<size_t>(e)] =
                state[static_cast<size_t>(e)] == VarState::AtLo ? lo[static_cast<size_t>(e)] : hi[static_cast<size_t>(e)];
            return StepOutcome::Moved;
        }

        int lv = basis[static_cast<size_t>(leave_row)];
        double rate = -col[static_cast<size_t>(leave_row)] * dir;
        if (rate < 0.0) {
            state[static_cast<size_t>(lv)] = VarState::AtLo;
            value[static_cast<size_t>(lv)] = lo[static_cast<size_t>(lv)];
        } else {
            state[static_cast<size_t>(lv)] = VarState::AtHi;
            value[static_cast<size_t>(lv)] = hi[static_cast<size_t>(lv)];
        }
        double enter_value =
            (dir > 0 ? lo[static_cast<size_t>(e)] : hi[static_cast<size_t>(e)]) + dir * delta;

        // Pivot: eliminate column e everywhere except leave_row.
        double piv = get(leave_row, e);
        double* prow = &a[static_cast<size_t>(leave_row) * static_cast<size_t>(ncols)];
        double inv = 1.0 / piv;
        for (int c = 0; c < ncols; ++c) prow[c] *= inv;
        for (int r = 0; r < m; ++r) {
            if (r == leave_row) continue;
            double f = get(r, e);
            if (std::abs(f) <= 1e-12) continue;
            double* row = &a[static_cast<size_t>(r) * static_cast<size_t>(ncols)];
            for (int c = 0; c < ncols; ++c) row[c] -= f * prow[c];
        }
        double fz = dj[static_cast<size_t>(e)];
        if (std::abs(fz) > 0.0) {
            for (int c = 0; c < ncols; ++c) dj[static_cast<size_t>(c)] -= fz * prow[c];
        }

        basis[static_cast<size_t>(leave_row)] = e;
        state[static_cast<size_t>(e)] = VarState::Basic;
        xb[static_cast<size_t>(leave_row)] = enter_value;
        return StepOutcome::Moved;
    }

    /// Minimizes `cost` from the current basis. Returns false if the pivot
    /// budget ran out before optimality.
    bool optimize(const std::vector<double>& cost, long max_iters) {
        compute_reduced_costs(cost);
        degenerate_streak = 0;
        for (long it = 0; it < max_iters; ++it) {
            bool bland = degenerate_streak > 200;
            int e = pick_entering(bland);
            if (e < 0) return true;
            // A genuinely unbounded direction cannot occur with bounded
            // structurals; if the ratio test finds nothing it is numeric
            // trouble, so refuse to certify anything.
            if (step(e) == StepOutcome::Unbounded) return false;
        }
        return false;
    }
};

}  // namespace

LpResult solve_lp(const LpProblem& p) {
    const int m = static_cast<int>(p.rows.size());
    const int n = p.nvars;

    // Columns: structurals, then one slack per inequality row, then one
    // artificial per row that needs one. Rows are normalized so the basis
    // of slacks/artificials starts primal feasible.
    Tableau t;
    t.m = m;

    std::vector<int> slack_col(static_cast<size_t>(m), -1);
    std::vector<int> art_col(static_cast<size_t>(m), -1);
    int ncols = n;
    for (int r = 0; r < m; ++r) {
        if (p.rows[static_cast<size_t>(r)].rel != Relation::Equal) slack_col[static_cast<size_t>(r)] = ncols++;
    }
    int first_art = ncols;
    // Row activity with structurals at lower bound decides whether the
    // slack alone can start basic and feasible.
    std::vector<double> act0(static_cast<size_t>(m), 0.0);
    std::vector<double> rhs(static_cast<size_t>(m), 0.0);
    std::vector<double> sign(static_cast<size_t>(m), 1.0);
    for (int r = 0; r < m; ++r) {
        const LinearConstraint& row = p.rows[static_cast<size_t>(r)];
        double a0 = 0.0;
        for (const LinearTerm& term : row.terms) a0 += term.coef * p.lo[static_cast<size_t>(term.var)];
        act0[static_cast<size_t>(r)] = a0;
        double b = row.rhs;
        bool need_art;
        switch (row.rel) {
            case Relation::LessEq:
                need_art = a0 > b + kFeasTol;
                break;
            case Relation::GreaterEq:
                need_art = a0 < b - kFeasTol;
                break;
            default:
                // Equality rows have no slack, so they always need the
                // artificial to seed the basis (basic at zero when the row
                // already holds at the starting point).
                need_art = true;
                break;
        }
        if (need_art) art_col[static_cast<size_t>(r)] = ncols++;
        rhs[static_cast<size_t>(r)] = b;
    }

    t.ncols = ncols;
    t.a.assign(static_cast<size_t>(m) * static_cast<size_t>(ncols), 0.0);
    t.lo.assign(static_cast<size_t>(ncols), 0.0);
    t.hi.assign(static_cast<size_t>(ncols), kInf);
    t.value.assign(static_cast<size_t>(ncols), 0.0);
    t.state.assign(static_cast<size_t>(ncols), VarState::AtLo);
    t.basis.assign(static_cast<size_t>(m), -1);
    t.xb.assign(static_cast<size_t>(m), 0.0);

    for (int c = 0; c < n; ++c) {
        t.lo[static_cast<size_t>(c)] = p.lo[static_cast<size_t>(c)];
        t.hi[static_cast<size_t>(c)] = p.hi[static_cast<size_t>(c)];
        t.value[static_cast<size_t>(c)] = p.lo[static_cast<size_t>(c)];
    }

    for (int r = 0; r < m; ++r) {
        const LinearConstraint& row = p.rows[static_cast<size_t>(r)];
        // Rows are sign-flipped so the starting basic column carries +1:
        // artificial rows by the sign of the residual, slack-basic >= rows
        // unconditionally (their slack coefficient is -1 before the flip).
        // Without this the tableau is not B^{-1}A and the ratio test runs
        // with inverted signs on those rows.
        double sg = 1.0;
        double resid = rhs[static_cast<size_t>(r)] - act0[static_cast<size_t>(r)];
        if (art_col[static_cast<size_t>(r)] >= 0) {
            if (resid < 0.0) sg = -1.0;
        } else if (row.rel == Relation::GreaterEq) {
            sg = -1.0;
        }
        sign[static_cast<size_t>(r)] = sg;
        for (const LinearTerm& term : row.terms) t.at(r, term.var) += sg * term.coef;
        if (slack_col[static_cast<size_t>(r)] >= 0) {
            double sc = row.rel == Relation::LessEq ? 1.0 : -1.0;
            t.at(r, slack_col[static_cast<size_t>(r)]) = sg * sc;
        }
        if (art_col[static_cast<size_t>(r)] >= 0) t.at(r, art_col[static_cast<size_t>(r)]) = 1.0;
    }

    // Initial basis: artificial where present, else the slack.
    for (int r = 0; r < m; ++r) {
        double resid = sign[static_cast<size_t>(r)] * (rhs[static_cast<size_t>(r)] - act0[static_cast<size_t>(r)]);
        if (art_col[static_cast<size_t>(r)] >= 0) {
            t.basis[static_cast<size_t>(r)] = art_col[static_cast<size_t>(r)];
            t.xb[static_cast<size_t>(r)] = resid;
            t.state[static_cast<size_t>(art_col[static_cast<size_t>(r)])] = VarState::Basic;
        } else {
            int sc = slack_col[static_cast<size_t>(r)];
            t.basis[static_cast<size_t>(r)] = sc;
            double scoef = t.get(r, sc);  // +-1
            t.xb[static_cast<size_t>(r)] = resid / scoef;
            t.state[static_cast<size_t>(sc)] = VarState::Basic;
        }
    }

    const long iter_cap = 100L * (m + ncols) + 1000;

    if (first_art < ncols) {
        std::vector<double> phase1(static_cast<size_t>(ncols), 0.0);
        for (int c = first_art; c < ncols; ++c) phase1[static_cast<size_t>(c)] = 1.0;
        if (!t.optimize(phase1, iter_cap)) return {LpResult::Status::Stalled, 0.0, {}};
        double infeas = 0.0;
        for (int c = first_art; c < ncols; ++c) infeas += t.var_value(c);
        // Claim infeasibility only with clear daylight; in the grey zone
        // between the simplex tolerance and that threshold, admit defeat
        // rather than prune a possibly feasible subproblem.
        if (infeas > 1e-4) return {LpResult::Status::Infeasible, 0.0, {}};
        if (infeas > 1e-7) return {LpResult::Status::Stalled, 0.0, {}};
        // Lock artificials at zero for phase 2.
        for (int c = first_art; c < ncols; ++c) {
            t.hi[static_cast<size_t>(c)] = 0.0;
            t.value[static_cast<size_t>(c)] = 0.0;
        }
    }

    std::vector<double> cost(static_cast<size_t>(ncols), 0.0);
    for (int c = 0; c < n; ++c) cost[static_cast<size_t>(c)] = p.cost[static_cast<size_t>(c)];
    if (!t.optimize(cost, iter_cap)) return {LpResult::Status::Stalled, 0.0, {}};

    LpResult res;
    res.x.assign(static_cast<size_t>(n), 0.0);
    for (int c = 0; c < n; ++c) {
        double v = t.var_value(c);
        v = std::min(std::max(v, p.lo[static_cast<size_t>(c)]), p.hi[static_cast<size_t>(c)]);
        res.x[static_cast<size_t>(c)] = v;
    }

    // Distrust the tableau: recheck every row at the claimed point. Any
    // drift downgrades the result to Stalled so callers never prune on a
    // bad bound.
    for (int r = 0; r < m; ++r) {
        const LinearConstraint& row = p.rows[static_cast<size_t>(r)];
        double act = 0.0;
        double scale = std::abs(row.rhs);
        for (const LinearTerm& term : row.terms) {
            act += term.coef * res.x[static_cast<size_t>(term.var)];
            scale = std::max(scale, std::abs(term.coef));
        }
        double slack_room = 1e-6 * (1.0 + scale);
        bool ok;
        switch (row.rel) {
            case Relation::LessEq: ok = act <= row.rhs + slack_room; break;
            case Relation::GreaterEq: ok = act >= row.rhs - slack_room; break;
            default: ok = std::abs(act - row.rhs) <= slack_room; break;
        }
        if (!ok) return {LpResult::Status::Stalled, 0.0, {}};
    }

    res.status = LpResult::Status::Optimal;
    res.objective = 0.0;
    for (int c = 0; c < n; ++c) res.objective += p.cost[static_cast<size_t>(c)] * res.x[static_cast<size_t>(c)];
    return res;
}

}  // namespace tabletop::detail
