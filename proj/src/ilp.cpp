#include "tabletop/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "simplex.hpp"
#include "tabletop/util.hpp"

namespace tabletop {

int IlpModel::add_var(const std::string& name) {
    var_names.push_back(name);
    return static_cast<int>(var_names.size()) - 1;
}

void IlpModel::add_constraint(std::vector<LinearTerm> terms, Relation rel, double rhs,
                              std::string name) {
    for (const LinearTerm& t : terms) {
        if (t.var < 0 || t.var >= num_vars()) {
            throw std::invalid_argument("ilp: constraint references unknown variable");
        }
    }
    constraints.push_back({std::move(terms), rel, rhs, std::move(name)});
}

void IlpModel::set_objective_coef(int var, double coef) {
    if (var < 0 || var >= num_vars()) throw std::invalid_argument("ilp: objective references unknown variable");
    for (LinearTerm& t : objective) {
        if (t.var == var) {
            t.coef += coef;
            return;
        }
    }
    objective.push_back({var, coef});
}

double IlpModel::objective_value(const std::vector<std::uint8_t>& assignment) const {
    double v = objective_constant;
    for (const LinearTerm& t : objective) {
        v += t.coef * assignment[static_cast<size_t>(t.var)];
    }
    return v;
}

bool IlpModel::feasible(const std::vector<std::uint8_t>& assignment) const {
    if (static_cast<int>(assignment.size()) != num_vars()) return false;
    for (const LinearConstraint& c : constraints) {
        double act = 0.0;
        double scale = std::abs(c.rhs);
        for (const LinearTerm& t : c.terms) {
            act += t.coef * assignment[static_cast<size_t>(t.var)];
            scale = std::max(scale, std::abs(t.coef));
        }
        double tol = 1e-6 * (1.0 + scale);
        switch (c.rel) {
            case Relation::LessEq:
                if (act > c.rhs + tol) return false;
                break;
            case Relation::GreaterEq:
                if (act < c.rhs - tol) return false;
                break;
            case Relation::Equal:
                if (std::abs(act - c.rhs) > tol) return false;
                break;
        }
    }
    return true;
}

namespace {

struct BudgetStop {};

/// One normalized row `terms <= rhs` for propagation; equalities contribute
/// two rows.
struct PropRow {
    std::vector<LinearTerm> terms;
    double rhs = 0.0;
};

struct Search {
    const IlpModel& model;
    SolveBudget budget;

    // Internal form is always minimization.
    std::vector<double> obj;
    double obj_const = 0.0;
    bool integral_objective = true;

    std::vector<PropRow> prop_rows;
    std::vector<std::vector<int>> var_rows;  // rows touching each var

    std::vector<int8_t> fixed;  // -1 free, else 0/1
    std::vector<int> trail;

    bool have_best = false;
    std::vector<std::uint8_t> best;
    double best_value = 0.0;

    long nodes = 0;
    Stopwatch clock;

    // Rows activated for the LP relaxation; persists across nodes and only
    // grows, so later nodes start from the already useful cut set.
    std::vector<char> lp_active;
    bool lp_enabled = true;

    explicit Search(const IlpModel& m, const SolveBudget& b) : model(m), budget(b) {
        const int n = model.num_vars();
        obj.assign(static_cast<size_t>(n), 0.0);
        double sgn = model.sense == Sense::Minimize ? 1.0 : -1.0;
        for (const LinearTerm& t : model.objective) obj[static_cast<size_t>(t.var)] += sgn * t.coef;
        obj_const = sgn * model.objective_constant;
        for (double c : obj) {
            if (std::abs(c - std::round(c)) > 1e-12) integral_objective = false;
        }
        if (std::abs(obj_const - std::round(obj_const)) > 1e-12) integral_objective = false;

        var_rows.assign(static_cast<size_t>(n), {});
        for (const LinearConstraint& c : model.constraints) {
            auto push = [&](std::vector<LinearTerm> terms, double rhs) {
                int idx = static_cast<int>(prop_rows.size());
                for (const LinearTerm& t : terms) var_rows[static_cast<size_t>(t.var)].push_back(idx);
                prop_rows.push_back({std::move(terms), rhs});
            };
            if (c.rel == Relation::LessEq || c.rel == Relation::Equal) push(c.terms, c.rhs);
            if (c.rel == Relation::GreaterEq || c.rel == Relation::Equal) {
                std::vector<LinearTerm> neg = c.terms;
                for (LinearTerm& t : neg) t.coef = -t.coef;
                push(std::move(neg), -c.rhs);
            }
        }

        fixed.assign(static_cast<size_t>(n), -1);
        lp_active.assign(model.constraints.size(), 0);
        // Equalities carry the structure (flow models); activate them all
        // up front, and everything when the model is small anyway.
        bool small = model.constraints.size() <= 800;
        for (size_t i = 0; i < model.constraints.size(); ++i) {
            if (small || model.constraints[i].rel == Relation::Equal) lp_active[i] = 1;
        }
        lp_enabled = n <= 5000;
    }

    void tick() {
        ++nodes;
        if (nodes > budget.max_nodes) throw BudgetStop{};
        if ((nodes & 255) == 0 && clock.seconds() > budget.max_seconds) throw BudgetStop{};
    }

    void fix(int v, int val) {
        fixed[static_cast<size_t>(v)] = static_cast<int8_t>(val);
        trail.push_back(v);
    }

    void rewind(size_t mark) {
        while (trail.size() > mark) {
            fixed[static_cast<size_t>(trail.back())] = -1;
            trail.pop_back();
        }
    }

    /// Fixed-point bound propagation. Returns false on conflict.
    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const PropRow& row : prop_rows) {
                double min_act = 0.0;
                double scale = std::abs(row.rhs);
                for (const LinearTerm& t : row.terms) {
                    scale = std::max(scale, std::abs(t.coef));
                    int8_t f = fixed[static_cast<size_t>(t.var)];
                    if (f >= 0) {
                        min_act += t.coef * f;
                    } else if (t.coef < 0.0) {
                        min_act += t.coef;
                    }
                }
                double tol = 1e-7 * (1.0 + scale);
                if (min_act > row.rhs + tol) return false;
                for (const LinearTerm& t : row.terms) {
                    if (fixed[static_cast<size_t>(t.var)] >= 0) continue;
                    if (t.coef > 0.0 && min_act + t.coef > row.rhs + tol) {
                        fix(t.var, 0);
                        changed = true;
                    } else if (t.coef < 0.0 && min_act - t.coef > row.rhs + tol) {
                        fix(t.var, 1);
                        changed = true;
                    }
                }
            }
        }
        return true;
    }

    double propagation_bound() const {
        double b = obj_const;
        for (int v = 0; v < model.num_vars(); ++v) {
            int8_t f = fixed[static_cast<size_t>(v)];
            double c = obj[static_cast<size_t>(v)];
            if (f >= 0) {
                b += c * f;
            } else if (c < 0.0) {
                b += c;
            }
        }
        return b;
    }

    double strengthen(double bound) const {
        if (integral_objective) return std::ceil(bound - 1e-6);
        return bound;
    }

    double internal_value(const std::vector<std::uint8_t>& assignment) const {
        double v = obj_const;
        for (int i = 0; i < model.num_vars(); ++i) {
            v += obj[static_cast<size_t>(i)] * assignment[static_cast<size_t>(i)];
        }
        return v;
    }

    void offer(const std::vector<std::uint8_t>& assignment) {
        if (!model.feasible(assignment)) return;
        double v = internal_value(assignment);
        if (!have_best || v < best_value - 1e-9) {
            have_best = true;
            best = assignment;
            best_value = v;
        }
    }

    struct LpOutcome {
        enum class Kind { Infeasible, NoBound, Bounded } kind = Kind::NoBound;
        double bound = 0.0;
        std::vector<double> x;
    };

    LpOutcome solve_relaxation() {
        LpOutcome out;
        if (!lp_enabled) return out;
        const int n = model.num_vars();

        detail::LpProblem lp;
        lp.nvars = n;
        lp.cost = obj;
        lp.lo.assign(static_cast<size_t>(n), 0.0);
        lp.hi.assign(static_cast<size_t>(n), 1.0);
        for (int v = 0; v < n; ++v) {
            int8_t f = fixed[static_cast<size_t>(v)];
            if (f >= 0) {
                lp.lo[static_cast<size_t>(v)] = f;
                lp.hi[static_cast<size_t>(v)] = f;
            }
        }

        for (int round = 0; round < 40; ++round) {
            lp.rows.clear();
            for (size_t i = 0; i < model.constraints.size(); ++i) {
                if (lp_active[i]) lp.rows.push_back(model.constraints[i]);
            }
            detail::LpResult res = detail::solve_lp(lp);
            if (res.status == detail::LpResult::Status::Infeasible) {
                // Infeasible on a row subset is infeasible for the model.
                out.kind = LpOutcome::Kind::Infeasible;
                return out;
            }
            if (res.status == detail::LpResult::Status::Stalled) return out;

            // Hunt for rows the relaxation point violates.
            struct Viol {
                double amount;
                size_t row;
            };
            std::vector<Viol> violated;
            for (size_t i = 0; i < model.constraints.size(); ++i) {
                if (lp_active[i]) continue;
                const LinearConstraint& c = model.constraints[i];
                double act = 0.0;
                double scale = std::abs(c.rhs);
                for (const LinearTerm& t : c.terms) {
                    act += t.coef * res.x[static_cast<size_t>(t.var)];
                    scale = std::max(scale, std::abs(t.coef));
                }
                double tol = 1e-7 * (1.0 + scale);
                double amount = 0.0;
                switch (c.rel) {
                    case Relation::LessEq: amount = act - c.rhs; break;
                    case Relation::GreaterEq: amount = c.rhs - act; break;
                    case Relation::Equal: amount = std::abs(act - c.rhs); break;
                }
                if (amount > tol) violated.push_back({amount, i});
            }
            if (violated.empty()) {
                out.kind = LpOutcome::Kind::Bounded;
                // Small safety margin: the simplex certifies optimality only
                // within its tolerances, and a lower bound must never sit
                // above the true relaxation value.
                out.bound = res.objective + obj_const - 1e-6 * (1.0 + std::abs(res.objective));
                out.x = std::move(res.x);
                return out;
            }
            std::sort(violated.begin(), violated.end(), [](const Viol& a, const Viol& b) {
                if (a.amount != b.amount) return a.amount > b.amount;
                return a.row < b.row;
            });
            size_t take = std::min<size_t>(violated.size(), 200);
            for (size_t k = 0; k < take; ++k) lp_active[violated[k].row] = 1;
        }
        return out;
    }

    void dfs() {
        tick();
        size_t mark = trail.size();
        if (!propagate()) {
            rewind(mark);
            return;
        }

        int free_count = 0;
        for (int v = 0; v < model.num_vars(); ++v) free_count += fixed[static_cast<size_t>(v)] < 0;

        if (free_count == 0) {
            std::vector<std::uint8_t> a(static_cast<size_t>(model.num_vars()));
            for (int v = 0; v < model.num_vars(); ++v) a[static_cast<size_t>(v)] = static_cast<std::uint8_t>(fixed[static_cast<size_t>(v)]);
            offer(a);
            rewind(mark);
            return;
        }

        double bound = strengthen(propagation_bound());
        if (have_best && bound >= best_value - 1e-9) {
            rewind(mark);
            return;
        }

        int branch_var = -1;
        int first_value = 1;
        LpOutcome lp = solve_relaxation();
        if (lp.kind == LpOutcome::Kind::Infeasible) {
            rewind(mark);
            return;
        }
        if (lp.kind == LpOutcome::Kind::Bounded) {
            double lb = strengthen(std::max(bound, lp.bound));
            if (have_best && lb >= best_value - 1e-9) {
                rewind(mark);
                return;
            }
            double worst_frac = -1.0;
            for (int v = 0; v < model.num_vars(); ++v) {
                if (fixed[static_cast<size_t>(v)] >= 0) continue;
                double x = lp.x[static_cast<size_t>(v)];
                double frac = std::min(x, 1.0 - x);
                if (frac > worst_frac + 1e-12) {
                    worst_frac = frac;
                    branch_var = v;
                }
            }
            if (worst_frac <= 1e-6) {
                // Integral relaxation point: it is the best this subtree
                // can do, so close the node once it verifies exactly.
                std::vector<std::uint8_t> a(static_cast<size_t>(model.num_vars()));
                for (int v = 0; v < model.num_vars(); ++v) {
                    int8_t f = fixed[static_cast<size_t>(v)];
                    a[static_cast<size_t>(v)] = f >= 0 ? static_cast<std::uint8_t>(f)
                                                       : static_cast<std::uint8_t>(std::lround(lp.x[static_cast<size_t>(v)]));
                }
                if (model.feasible(a)) {
                    offer(a);
                    rewind(mark);
                    return;
                }
                // Rounding broke a tight row; fall through and branch.
            }
            if (branch_var >= 0) {
                first_value = lp.x[static_cast<size_t>(branch_var)] >= 0.5 ? 1 : 0;
            }
        }
        if (branch_var < 0) {
            for (int v = 0; v < model.num_vars(); ++v) {
                if (fixed[static_cast<size_t>(v)] < 0) {
                    branch_var = v;
                    break;
                }
            }
            first_value = 1;
        }

        for (int attempt = 0; attempt < 2; ++attempt) {
            int val = attempt == 0 ? first_value : 1 - first_value;
            size_t child_mark = trail.size();
            fix(branch_var, val);
            dfs();
            rewind(child_mark);
        }
        rewind(mark);
    }
};

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::optional<IlpSolution> try_external_solver(const IlpModel& model, const std::string& exe) {
    namespace fs = std::filesystem;
    char tmpl[] = "/tmp/ilp_XXXXXX";
    char* dir = mkdtemp(tmpl);
    if (dir == nullptr) return std::nullopt;
    fs::path base(dir);
    fs::path model_path = base / "model.lp";
    fs::path sol_path = base / "solution.txt";

    std::optional<IlpSolution> result;
    {
        std::ofstream out(model_path);
        out << to_lp_format(model);
    }
    std::string cmd = "\"" + exe + "\" \"" + model_path.string() + "\" \"" + sol_path.string() + "\"";
    int rc = std::system(cmd.c_str());
    if (rc == 0) {
        std::ifstream in(sol_path);
        if (in) {
            std::vector<std::uint8_t> assignment(static_cast<size_t>(model.num_vars()), 0);
            bool parse_ok = true;
            bool declared_infeasible = false;
            std::string line;
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                std::string head;
                if (!(ls >> head) || head[0] == '#') continue;
                if (head == "status") {
                    std::string s;
                    ls >> s;
                    if (s == "infeasible") declared_infeasible = true;
                    continue;
                }
                if (head == "objective") continue;
                double value;
                if (!(ls >> value)) {
                    parse_ok = false;
                    break;
                }
                int var = -1;
                for (int v = 0; v < model.num_vars(); ++v) {
                    if (model.var_names[static_cast<size_t>(v)] == head) {
                        var = v;
                        break;
                    }
                }
                if (var < 0 || std::abs(value - std::round(value)) > 1e-4) {
                    parse_ok = false;
                    break;
                }
                assignment[static_cast<size_t>(var)] = std::round(value) != 0.0 ? 1 : 0;
            }
            if (parse_ok && declared_infeasible) {
                IlpSolution sol;
                sol.status = SolveStatus::Infeasible;
                result = sol;
            } else if (parse_ok && model.feasible(assignment)) {
                IlpSolution sol;
                sol.status = SolveStatus::Optimal;
                sol.assignment = std::move(assignment);
                sol.objective = model.objective_value(sol.assignment);
                result = sol;
            }
        }
    }
    std::error_code ec;
    fs::remove_all(base, ec);
    if (!result) {
        std::cerr << "external ilp solver '" << exe << "' failed; using built-in solver\n";
    }
    return result;
}

}  // namespace

IlpSolution IlpEngine::solve(const IlpModel& model, std::optional<SolveBudget> budget,
                             const std::vector<std::uint8_t>* warm_start) const {
    std::string exe = external_solver;
    if (exe.empty()) {
        const char* env = std::getenv("REARRANGE_ILP_EXE");
        if (env != nullptr && *env != '\0') exe = env;
    }
    if (!exe.empty()) {
        if (auto ext = try_external_solver(model, exe)) return *ext;
    }

    Search search(model, budget.value_or(default_budget));
    if (warm_start != nullptr && static_cast<int>(warm_start->size()) == model.num_vars()) {
        search.offer(*warm_start);
    }

    IlpSolution sol;
    bool exhausted = false;
    try {
        search.dfs();
    } catch (const BudgetStop&) {
        exhausted = true;
    }
    sol.nodes_explored = search.nodes;
    if (search.have_best) {
        sol.status = exhausted ? SolveStatus::BudgetExhausted : SolveStatus::Optimal;
        sol.assignment = search.best;
        sol.objective = model.objective_value(sol.assignment);
    } else {
        sol.status = exhausted ? SolveStatus::BudgetExhausted : SolveStatus::Infeasible;
    }
    return sol;
}

std::vector<IlpSolution> IlpEngine::solve_all_optima(const IlpModel& model,
                                                     const std::vector<int>& projection,
                                                     std::optional<SolveBudget> budget,
                                                     int max_solutions, bool* truncated) const {
    std::vector<int> proj = projection;
    if (proj.empty()) {
        for (int v = 0; v < model.num_vars(); ++v) proj.push_back(v);
    }
    if (truncated != nullptr) *truncated = false;

    std::vector<IlpSolution> found;
    IlpModel work = model;
    IlpSolution first = solve(work, budget);
    if (first.status == SolveStatus::Infeasible) return found;
    if (first.status == SolveStatus::BudgetExhausted) {
        if (truncated != nullptr) *truncated = true;
        return found;
    }
    double opt = first.objective;
    double tol = 1e-6 * (1.0 + std::abs(opt));
    found.push_back(first);

    for (;;) {
        if (static_cast<int>(found.size()) >= max_solutions) {
            if (truncated != nullptr) *truncated = true;
            return found;
        }
        // Exclude the pattern just found, projected onto `proj`.
        const std::vector<std::uint8_t>& prev = found.back().assignment;
        std::vector<LinearTerm> terms;
        double rhs = 1.0;
        for (int v : proj) {
            if (prev[static_cast<size_t>(v)] != 0) {
                terms.push_back({v, -1.0});
                rhs -= 1.0;
            } else {
                terms.push_back({v, 1.0});
            }
        }
        work.add_constraint(std::move(terms), Relation::GreaterEq, rhs);

        IlpSolution next = solve(work, budget);
        if (next.status == SolveStatus::Infeasible) return found;
        if (next.status == SolveStatus::BudgetExhausted) {
            if (truncated != nullptr) *truncated = true;
            return found;
        }
        bool degraded = model.sense == Sense::Minimize ? next.objective > opt + tol
                                                       : next.objective < opt - tol;
        if (degraded) return found;
        found.push_back(next);
    }
}

std::string to_lp_format(const IlpModel& model, const std::string& comment) {
    std::ostringstream os;
    if (!comment.empty()) {
        std::istringstream cs(comment);
        std::string line;
        while (std::getline(cs, line)) os << "\\ " << line << "\n";
    }

    auto var_name = [&model](int v) {
        const std::string& nm = model.var_names[static_cast<size_t>(v)];
        return nm.empty() ? "x" + std::to_string(v) : nm;
    };

    auto write_terms = [&](const std::vector<LinearTerm>& terms, double constant) {
        bool first = true;
        for (const LinearTerm& t : terms) {
            if (t.coef == 0.0) continue;
            double mag = std::abs(t.coef);
            if (first) {
                if (t.coef < 0.0) os << "- ";
            } else {
                os << (t.coef < 0.0 ? " - " : " + ");
            }
            if (mag != 1.0) os << format_double(mag) << ' ';
            os << var_name(t.var);
            first = false;
        }
        if (constant != 0.0) {
            if (!first) os << (constant < 0.0 ? " - " : " + ");
            else if (constant < 0.0) os << "- ";
            os << format_double(std::abs(constant));
            first = false;
        }
    };

    os << (model.sense == Sense::Minimize ? "Minimize\n" : "Maximize\n");
    os << " obj:";
    // Canonical order keeps the file stable however the objective was
    // accumulated.
    std::vector<LinearTerm> obj_terms;
    {
        std::vector<double> dense(static_cast<size_t>(model.num_vars()), 0.0);
        for (const LinearTerm& t : model.objective) dense[static_cast<size_t>(t.var)] += t.coef;
        for (int v = 0; v < model.num_vars(); ++v) {
            if (dense[static_cast<size_t>(v)] != 0.0) obj_terms.push_back({v, dense[static_cast<size_t>(v)]});
        }
    }
    if (!obj_terms.empty() || model.objective_constant != 0.0) {
        os << ' ';
        write_terms(obj_terms, model.objective_constant);
    }
    os << "\nSubject To\n";
    for (size_t i = 0; i < model.constraints.size(); ++i) {
        const LinearConstraint& c = model.constraints[i];
        os << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ": ";
        write_terms(c.terms, 0.0);
        if (c.terms.empty()) os << "0";
        switch (c.rel) {
            case Relation::LessEq: os << " <= "; break;
            case Relation::GreaterEq: os << " >= "; break;
            case Relation::Equal: os << " = "; break;
        }
        os << format_double(c.rhs) << "\n";
    }
    os << "Binary\n";
    for (int v = 0; v < model.num_vars(); ++v) os << ' ' << var_name(v) << "\n";
    os << "End\n";
    return os.str();
}

namespace {

bool parse_number(const std::string& tok, double* out) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size()) return false;
    *out = v;
    return true;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

IlpModel parse_lp_format(const std::string& text) {
    // Two passes: the Binary section pins variable order, then expressions
    // are parsed against it.
    std::vector<std::string> lines;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty() && line[0] == '\\') continue;
            lines.push_back(line);
        }
    }

    enum class Section { None, Objective, Constraints, Bounds, Binary, End };
    auto classify = [](const std::string& line, Section* sec, Sense* sense) {
        std::string t = lower(line);
        // Trim edges.
        size_t a = t.find_first_not_of(" \t\r");
        if (a == std::string::npos) return false;
        size_t b = t.find_last_not_of(" \t\r");
        t = t.substr(a, b - a + 1);
        if (t == "minimize" || t == "min") {
            *sec = Section::Objective;
            *sense = Sense::Minimize;
            return true;
        }
        if (t == "maximize" || t == "max") {
            *sec = Section::Objective;
            *sense = Sense::Maximize;
            return true;
        }
        if (t == "subject to" || t == "st" || t == "s.t.") {
            *sec = Section::Constraints;
            return true;
        }
        if (t == "bounds") {
            *sec = Section::Bounds;
            return true;
        }
        if (t == "binary" || t == "binaries" || t == "bin") {
            *sec = Section::Binary;
            return true;
        }
        if (t == "end") {
            *sec = Section::End;
            return true;
        }
        return false;
    };

    IlpModel model;
    {
        Section sec = Section::None;
        Sense ignored;
        for (const std::string& line : lines) {
            Section next = sec;
            if (classify(line, &next, &ignored)) {
                sec = next;
                continue;
            }
            if (sec == Section::Binary) {
                std::istringstream ls(line);
                std::string name;
                while (ls >> name) model.add_var(name);
            }
        }
        if (model.num_vars() == 0) {
            // Tolerated: a model with no variables (constant objective).
        }
    }

    auto var_index = [&model](const std::string& name) {
        for (int v = 0; v < model.num_vars(); ++v) {
            if (model.var_names[static_cast<size_t>(v)] == name) return v;
        }
        throw std::invalid_argument("lp parse: unknown variable '" + name + "'");
    };

    // expr := [+-] [number] [name] ... ; bare numbers accumulate into
    // `constant`.
    auto parse_expr = [&](const std::vector<std::string>& toks, size_t from, size_t to,
                          std::vector<LinearTerm>* terms, double* constant) {
        double sign = 1.0;
        std::optional<double> pending;
        for (size_t k = from; k < to; ++k) {
            const std::string& tok = toks[k];
            if (tok == "+") continue;
            if (tok == "-") {
                sign = -sign;
                continue;
            }
            double num;
            if (parse_number(tok, &num)) {
                if (pending) *constant += sign * *pending;  // previous number had no variable
                pending = num;
                continue;
            }
            double coef = sign * pending.value_or(1.0);
            terms->push_back({var_index(tok), coef});
            pending.reset();
            sign = 1.0;
        }
        if (pending) *constant += sign * *pending;
    };

    auto tokenize = [](const std::string& line) {
        std::vector<std::string> toks;
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
        return toks;
    };

    Section sec = Section::None;
    for (const std::string& line : lines) {
        Section next = sec;
        Sense sense = model.sense;
        if (classify(line, &next, &sense)) {
            if (next == Section::Objective) model.sense = sense;
            sec = next;
            continue;
        }
        std::vector<std::string> toks = tokenize(line);
        if (toks.empty()) continue;

        if (sec == Section::Objective) {
            size_t from = 0;
            if (!toks.empty() && toks[0].back() == ':') from = 1;
            std::vector<LinearTerm> terms;
            double constant = 0.0;
            parse_expr(toks, from, toks.size(), &terms, &constant);
            for (const LinearTerm& t : terms) model.set_objective_coef(t.var, t.coef);
            model.objective_constant += constant;
        } else if (sec == Section::Constraints) {
            size_t rel_pos = toks.size();
            Relation rel = Relation::LessEq;
            for (size_t k = 0; k < toks.size(); ++k) {
                if (toks[k] == "<=" || toks[k] == "<") {
                    rel_pos = k;
                    rel = Relation::LessEq;
                } else if (toks[k] == ">=" || toks[k] == ">") {
                    rel_pos = k;
                    rel = Relation::GreaterEq;
                } else if (toks[k] == "=") {
                    rel_pos = k;
                    rel = Relation::Equal;
                }
            }
            if (rel_pos == toks.size() || rel_pos + 1 >= toks.size()) {
                throw std::invalid_argument("lp parse: constraint line lacks a relation: " + line);
            }
            double rhs;
            if (!parse_number(toks[rel_pos + 1], &rhs)) {
                throw std::invalid_argument("lp parse: bad right-hand side: " + line);
            }
            size_t from = 0;
            std::string name;
            if (toks[0].back() == ':') {
                name = toks[0].substr(0, toks[0].size() - 1);
                from = 1;
            }
            std::vector<LinearTerm> terms;
            double constant = 0.0;
            parse_expr(toks, from, rel_pos, &terms, &constant);
            model.add_constraint(std::move(terms), rel, rhs - constant, name);
        }
        // Bounds and Binary handled elsewhere or ignored.
    }
    return model;
}

}  // namespace tabletop
