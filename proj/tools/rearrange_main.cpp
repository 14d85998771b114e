#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tabletop/bench.hpp"
#include "tabletop/depgraph.hpp"
#include "tabletop/fvs.hpp"
#include "tabletop/ilp.hpp"
#include "tabletop/instance.hpp"
#include "tabletop/mindist.hpp"
#include "tabletop/pipeline.hpp"
#include "tabletop/tsp.hpp"
#include "tabletop/util.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 2;
constexpr int kBudgetExhausted = 3;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

tabletop::Instance load_instance(const std::string& path) {
    tabletop::Instance inst = tabletop::instance_from_json(read_input(path));
    auto bad = tabletop::validate(inst);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid instance:";
        for (const auto& b : bad) os << "\n  " << b;
        throw std::invalid_argument(os.str());
    }
    return inst;
}

struct EngineOptions {
    std::string external;
    long max_nodes = 0;
    double max_seconds = 0.0;

    tabletop::IlpEngine make() const {
        tabletop::IlpEngine engine;
        engine.external_solver = external;
        if (max_nodes > 0) engine.default_budget.max_nodes = max_nodes;
        if (max_seconds > 0.0) engine.default_budget.max_seconds = max_seconds;
        return engine;
    }

    std::optional<tabletop::SolveBudget> budget() const {
        if (max_nodes <= 0 && max_seconds <= 0.0) return std::nullopt;
        tabletop::SolveBudget b;
        if (max_nodes > 0) b.max_nodes = max_nodes;
        if (max_seconds > 0.0) b.max_seconds = max_seconds;
        return b;
    }
};

void add_engine_flags(CLI::App* cmd, EngineOptions& opts) {
    cmd->add_option("--external-ilp", opts.external,
                    "external 0/1 program solver: invoked as `exe model.lp solution.txt`");
    cmd->add_option("--budget-nodes", opts.max_nodes, "search node limit per program solve");
    cmd->add_option("--budget-seconds", opts.max_seconds, "wall clock limit per program solve");
}

std::vector<int> parse_id_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabletop rearrangement: fewest pick-and-place actions, shortest travel"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "sample a random instance as JSON");
    int gen_n = 5;
    std::uint64_t gen_seed = 1;
    double gen_degree = -1.0;
    int gen_max_degree = 4;
    int gen_buffers = -1;
    double gen_radius = 0.5;
    bool gen_unlabeled = false;
    std::string gen_out = "-";
    gen->add_option("-n,--objects", gen_n, "number of objects")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--degree", gen_degree,
                    "average dependency degree; omit for fully disjoint placements");
    gen->add_option("--max-degree", gen_max_degree, "per-object dependency cap");
    gen->add_option("--buffers", gen_buffers, "buffer spots to place (default: one per object)");
    gen->add_option("--radius", gen_radius, "disc radius")->check(CLI::PositiveNumber);
    gen->add_flag("--unlabeled", gen_unlabeled, "goals are interchangeable");
    gen->add_option("-o,--out", gen_out, "output path, - for stdout");

    // solve
    auto* solve = app.add_subcommand("solve", "plan a rearrangement and report it as JSON");
    std::string solve_in = "-";
    std::string solve_method = "auto";
    std::uint64_t solve_seed = 1;
    int solve_branches = 16;
    int solve_threads = 0;
    std::string solve_out = "-";
    EngineOptions solve_engine;
    solve->add_option("-i,--in", solve_in, "instance JSON path, - for stdin");
    solve->add_option("-m,--method", solve_method,
                      "auto|tsp-exact|tsp-heur|fvs-single|fvs-complete|greedy|random");
    solve->add_option("--seed", solve_seed, "seed for the random baseline");
    solve->add_option("--max-branches", solve_branches,
                      "buffered-set candidates tried by fvs-complete");
    solve->add_option("--threads", solve_threads, "scheduling branches solved in parallel");
    solve->add_option("-o,--out", solve_out, "output path, - for stdout");
    add_engine_flags(solve, solve_engine);

    // bench
    auto* bench = app.add_subcommand("bench", "sweep generated instances, report CSV");
    std::vector<int> bench_sizes;
    std::vector<double> bench_degrees;
    std::vector<std::string> bench_methods;
    int bench_instances = 20;
    std::uint64_t bench_seed = 1;
    int bench_max_degree = 4;
    bool bench_unlabeled = false;
    int bench_threads = 0;
    std::string bench_out = "-";
    EngineOptions bench_engine;
    bench->add_option("--sizes", bench_sizes, "object counts")->required()->delimiter(',');
    bench->add_option("--degrees", bench_degrees, "average dependency degrees (omit: disjoint)")
        ->delimiter(',');
    bench->add_option("--methods", bench_methods,
                      "solve methods plus msch|mch|mdh|fvs-ilp|fvs-count")
        ->required()
        ->delimiter(',');
    bench->add_option("--instances", bench_instances, "instances per sweep point");
    bench->add_option("--seed", bench_seed, "base seed");
    bench->add_option("--max-degree", bench_max_degree, "per-object dependency cap");
    bench->add_flag("--unlabeled", bench_unlabeled, "disjoint sweeps use interchangeable goals");
    bench->add_option("--threads", bench_threads, "worker threads");
    bench->add_option("-o,--out", bench_out, "output path, - for stdout");
    add_engine_flags(bench, bench_engine);

    // export-lp
    auto* explp = app.add_subcommand("export-lp", "write the scheduling program in LP format");
    std::string explp_in = "-";
    std::string explp_out = "-";
    std::string explp_buffered;
    EngineOptions explp_engine;
    explp->add_option("-i,--in", explp_in, "instance JSON path, - for stdin");
    explp->add_option("--buffered", explp_buffered,
                      "comma-separated object ids granted a buffer detour "
                      "(default: a computed minimum set)");
    explp->add_option("-o,--out", explp_out, "output path, - for stdout");
    add_engine_flags(explp, explp_engine);

    // export-graph
    auto* expg = app.add_subcommand("export-graph", "write the dependency digraph as text");
    std::string expg_in = "-";
    std::string expg_out = "-";
    std::string expg_format = "edges";
    expg->add_option("-i,--in", expg_in, "instance JSON path, - for stdin");
    expg->add_option("--format", expg_format, "edges|adjacency");
    expg->add_option("-o,--out", expg_out, "output path, - for stdout");

    // export-tsp
    auto* expt = app.add_subcommand("export-tsp", "write the tour graph in TSPLIB format");
    std::string expt_in = "-";
    std::string expt_out = "-";
    std::string expt_name = "tour";
    expt->add_option("-i,--in", expt_in, "instance JSON path, - for stdin");
    expt->add_option("--name", expt_name, "NAME record");
    expt->add_option("-o,--out", expt_out, "output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidationFailure;
    }

    try {
        if (gen->parsed()) {
            tabletop::Instance inst;
            if (gen_degree >= 0.0) {
                inst = tabletop::generate_with_overlap(gen_n, gen_degree, gen_max_degree, gen_seed,
                                                       gen_buffers, gen_radius);
            } else {
                if (gen_buffers > 0) {
                    throw std::invalid_argument("--buffers needs --degree (disjoint instances take none)");
                }
                inst = tabletop::generate_no_overlap(gen_n, gen_seed, gen_radius);
            }
            if (gen_unlabeled) inst.labeled = false;
            write_output(gen_out, tabletop::instance_to_json(inst));
            return kOk;
        }

        if (solve->parsed()) {
            tabletop::Instance inst = load_instance(solve_in);
            auto method = tabletop::method_from_name(solve_method);
            if (!method) throw std::invalid_argument("unknown method: " + solve_method);
            tabletop::IlpEngine engine = solve_engine.make();
            tabletop::SolveOptions options;
            options.method = *method;
            options.seed = solve_seed;
            options.ilp_budget = solve_engine.budget();
            options.max_branches = solve_branches;
            options.threads = solve_threads;

            tabletop::SolveReport report;
            switch (*method) {
                case tabletop::SolveMethod::Auto:
                    report = tabletop::solve_auto(inst, engine, options);
                    break;
                case tabletop::SolveMethod::TspExact:
                    report = tabletop::solve_no_overlap(inst, tabletop::TourMode::Exact);
                    break;
                case tabletop::SolveMethod::TspHeuristic:
                    report = tabletop::solve_no_overlap(inst, tabletop::TourMode::Heuristic);
                    break;
                case tabletop::SolveMethod::FvsSingle:
                    report = tabletop::solve_fvs_single(inst, engine, options);
                    break;
                case tabletop::SolveMethod::FvsComplete:
                    report = tabletop::solve_fvs_complete(inst, engine, options);
                    break;
                case tabletop::SolveMethod::Greedy:
                    report = tabletop::solve_greedy(inst);
                    break;
                case tabletop::SolveMethod::Random:
                    report = tabletop::solve_random(inst, solve_seed);
                    break;
            }
            write_output(solve_out, tabletop::report_to_json(report));
            std::cerr << "method=" << report.method << " grasps=" << report.cost.grasps
                      << " distance=" << report.cost.distance << " time=" << report.seconds
                      << "s\n";
            return report.budget_exhausted ? kBudgetExhausted : kOk;
        }

        if (bench->parsed()) {
            tabletop::BenchConfig config;
            config.sizes = bench_sizes;
            config.degrees = bench_degrees;
            config.methods = bench_methods;
            config.instances = bench_instances;
            config.seed = bench_seed;
            config.max_degree = bench_max_degree;
            config.unlabeled = bench_unlabeled;
            config.threads = bench_threads;
            config.ilp_budget = bench_engine.budget();
            tabletop::IlpEngine engine = bench_engine.make();
            auto rows = tabletop::run_bench(config, engine);
            write_output(bench_out, tabletop::bench_csv(rows));
            for (const auto& row : rows) {
                if (!row.flag.empty()) return kBudgetExhausted;
            }
            return kOk;
        }

        if (explp->parsed()) {
            tabletop::Instance inst = load_instance(explp_in);
            tabletop::IlpEngine engine = explp_engine.make();
            std::vector<int> buffered;
            if (!explp_buffered.empty()) {
                for (int id : parse_id_list(explp_buffered)) {
                    int idx = -1;
                    for (int i = 0; i < inst.num_objects(); ++i) {
                        if (inst.objects[static_cast<size_t>(i)].id == id) idx = i;
                    }
                    if (idx < 0) throw std::invalid_argument("unknown object id in --buffered");
                    buffered.push_back(idx);
                }
            } else {
                auto dep = tabletop::build_dependency_graph(inst);
                buffered = tabletop::fvs_ilp_constraint(dep, engine).vertices;
            }
            auto model = tabletop::build_mindist_model(inst, buffered);
            write_output(explp_out, tabletop::to_lp_format(model.model,
                                                           "time-expanded rearrangement schedule"));
            return kOk;
        }

        if (expg->parsed()) {
            tabletop::Instance inst = load_instance(expg_in);
            auto dep = tabletop::build_dependency_graph(inst);
            if (expg_format == "edges") {
                write_output(expg_out, tabletop::to_edge_list_text(dep));
            } else if (expg_format == "adjacency") {
                write_output(expg_out, tabletop::to_adjacency_text(dep));
            } else {
                throw std::invalid_argument("unknown graph format: " + expg_format);
            }
            return kOk;
        }

        if (expt->parsed()) {
            tabletop::Instance inst = load_instance(expt_in);
            tabletop::TourGraph g = inst.labeled ? tabletop::build_labeled_tour_graph(inst)
                                                 : tabletop::build_unlabeled_tour_graph(inst);
            write_output(expt_out, tabletop::to_tsplib(g, expt_name));
            return kOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const tabletop::SamplingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const tabletop::SizeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const tabletop::CycleCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
