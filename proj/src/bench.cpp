#include "tabletop/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tabletop/depgraph.hpp"
#include "tabletop/fvs.hpp"
#include "tabletop/pipeline.hpp"
#include "tabletop/util.hpp"

namespace tabletop {

namespace {

const char* const kExtraMethods[] = {"msch", "mch", "mdh", "fvs-ilp", "fvs-count"};

bool is_extra(const std::string& m) {
    for (const char* e : kExtraMethods) {
        if (m == e) return true;
    }
    return false;
}

bool is_plan_method(const std::string& m) {
    auto parsed = method_from_name(m);
    return parsed.has_value();
}

struct Sample {
    double time = 0.0;
    double value = 0.0;   // distance, or set size / count for extras
    double grasps = 0.0;
    double ratio = 0.0;
    bool has_ratio = false;
    bool budget = false;
    bool error = false;
};

struct PointTask {
    int n = 0;
    double degree = 0.0;
    bool has_degree = false;
    std::uint64_t seed = 0;
};

double reference_distance(const Instance& inst, const IlpEngine& engine, bool& ok) {
    ok = false;
    const int n = inst.num_objects();
    if (starts_goals_disjoint(inst)) {
        bool fits = inst.labeled ? n + 1 <= 16 : n <= 12;
        if (!fits) return 0.0;
        SolveReport ref = solve_no_overlap(inst, TourMode::Exact);
        ok = true;
        return ref.cost.distance;
    }
    if (!inst.labeled || n > 6) return 0.0;
    SolveOptions opt;
    opt.threads = 1;
    SolveReport ref = solve_fvs_complete(inst, engine, opt);
    if (!ref.optimal_distance) return 0.0;
    ok = true;
    return ref.cost.distance;
}

Sample run_plan_method(const Instance& inst, const std::string& method, const IlpEngine& engine,
                       const BenchConfig& config, std::uint64_t seed, double ref, bool has_ref) {
    Sample s;
    Stopwatch clock;
    try {
        SolveOptions opt;
        opt.threads = 1;
        opt.ilp_budget = config.ilp_budget;
        SolveReport rep;
        switch (*method_from_name(method)) {
            case SolveMethod::Auto: rep = solve_auto(inst, engine, opt); break;
            case SolveMethod::TspExact: rep = solve_no_overlap(inst, TourMode::Exact); break;
            case SolveMethod::TspHeuristic: rep = solve_no_overlap(inst, TourMode::Heuristic); break;
            case SolveMethod::FvsSingle: rep = solve_fvs_single(inst, engine, opt); break;
            case SolveMethod::FvsComplete: rep = solve_fvs_complete(inst, engine, opt); break;
            case SolveMethod::Greedy: rep = solve_greedy(inst); break;
            case SolveMethod::Random: rep = solve_random(inst, mix_seed(seed, 0x5eed)); break;
        }
        s.time = clock.seconds();
        s.value = rep.cost.distance;
        s.grasps = rep.cost.grasps;
        s.budget = rep.budget_exhausted;
        if (has_ref && ref > 1e-12) {
            s.ratio = rep.cost.distance / ref;
            s.has_ratio = true;
        }
    } catch (const std::exception&) {
        s.error = true;
        s.time = clock.seconds();
    }
    return s;
}

Sample run_extra_method(const Instance& inst, const std::string& method, const IlpEngine& engine) {
    Sample s;
    Stopwatch clock;
    try {
        DependencyDigraph dep = build_dependency_graph(inst);
        const int n = inst.num_objects();
        if (method == "fvs-count") {
            bool truncated = false;
            auto sets = enumerate_optimal_fvs(dep, engine, 100000, 100000, &truncated);
            s.time = clock.seconds();
            s.value = static_cast<double>(sets.size());
            s.grasps = sets.empty() ? n : n + sets.front().size();
            s.budget = truncated;
            return s;
        }
        FeedbackVertexSet set;
        if (method == "msch") set = fvs_msch(dep);
        else if (method == "mch") set = fvs_mch(dep);
        else if (method == "mdh") set = fvs_mdh(dep);
        else set = fvs_ilp_enumerate(dep, engine);
        s.time = clock.seconds();
        s.value = set.size();
        s.grasps = n + set.size();
        if (method == "fvs-ilp") {
            s.budget = !set.certified_optimal;
            s.ratio = 1.0;
            s.has_ratio = set.certified_optimal;
        } else {
            FeedbackVertexSet opt = fvs_ilp_enumerate(dep, engine);
            if (opt.certified_optimal) {
                s.ratio = opt.size() >= 1 ? static_cast<double>(set.size()) / opt.size() : 1.0;
                s.has_ratio = true;
            }
        }
    } catch (const std::exception&) {
        s.error = true;
        s.time = clock.seconds();
    }
    return s;
}

std::string format_short(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config, const IlpEngine& engine) {
    for (const std::string& m : config.methods) {
        if (!is_plan_method(m) && !is_extra(m)) {
            throw std::invalid_argument("unknown bench method: " + m);
        }
    }
    if (config.sizes.empty() || config.methods.empty() || config.instances <= 0) {
        throw std::invalid_argument("bench needs sizes, methods and a positive instance count");
    }

    std::vector<PointTask> points;
    for (size_t si = 0; si < config.sizes.size(); ++si) {
        if (config.degrees.empty()) {
            points.push_back({config.sizes[si], 0.0, false, mix_seed(config.seed, si)});
        } else {
            for (size_t di = 0; di < config.degrees.size(); ++di) {
                points.push_back({config.sizes[si], config.degrees[di], true,
                                  mix_seed(config.seed, si * 1000 + di)});
            }
        }
    }

    // metrics[point][method][instance]
    std::vector<std::vector<std::vector<Sample>>> metrics(
        points.size(), std::vector<std::vector<Sample>>(
                           config.methods.size(),
                           std::vector<Sample>(static_cast<size_t>(config.instances))));

    bool needs_ref = false;
    for (const std::string& m : config.methods) {
        if (is_plan_method(m)) needs_ref = true;
    }

    struct Job {
        size_t point, instance;
    };
    std::vector<Job> jobs;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        for (int k = 0; k < config.instances; ++k) jobs.push_back({pi, static_cast<size_t>(k)});
    }

    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        for (size_t j = cursor.fetch_add(1); j < jobs.size(); j = cursor.fetch_add(1)) {
            const PointTask& pt = points[jobs[j].point];
            std::uint64_t seed = mix_seed(pt.seed, jobs[j].instance);
            Instance inst;
            bool gen_failed = false;
            try {
                if (pt.has_degree) {
                    inst = generate_with_overlap(pt.n, pt.degree, config.max_degree, seed);
                } else {
                    inst = generate_no_overlap(pt.n, seed);
                    if (config.unlabeled) inst.labeled = false;
                }
            } catch (const std::exception&) {
                gen_failed = true;
            }
            double ref = 0.0;
            bool has_ref = false;
            if (!gen_failed && needs_ref) {
                try {
                    ref = reference_distance(inst, engine, has_ref);
                } catch (const std::exception&) {
                    has_ref = false;
                }
            }
            for (size_t mi = 0; mi < config.methods.size(); ++mi) {
                Sample& slot = metrics[jobs[j].point][mi][jobs[j].instance];
                if (gen_failed) {
                    slot.error = true;
                    continue;
                }
                const std::string& m = config.methods[mi];
                slot = is_extra(m) ? run_extra_method(inst, m, engine)
                                   : run_plan_method(inst, m, engine, config, seed, ref, has_ref);
            }
        }
    };
    int want = config.threads > 0 ? config.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    want = std::max(1, std::min<int>(want, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < want; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<BenchRow> rows;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        for (size_t mi = 0; mi < config.methods.size(); ++mi) {
            BenchRow row;
            row.n = points[pi].n;
            row.degree = points[pi].degree;
            row.has_degree = points[pi].has_degree;
            row.method = config.methods[mi];
            int ok = 0, with_ratio = 0;
            bool budget = false, partial = false;
            for (const Sample& s : metrics[pi][mi]) {
                if (s.error) {
                    partial = true;
                    continue;
                }
                ++ok;
                row.mean_time_s += s.time;
                row.mean_distance += s.value;
                row.mean_grasps += s.grasps;
                if (s.has_ratio) {
                    ++with_ratio;
                    row.mean_ratio_to_exact += s.ratio;
                }
                budget = budget || s.budget;
            }
            if (ok > 0) {
                row.mean_time_s /= ok;
                row.mean_distance /= ok;
                row.mean_grasps /= ok;
            } else {
                partial = true;
            }
            if (with_ratio == ok && ok > 0) {
                row.mean_ratio_to_exact /= with_ratio;
                row.has_ratio = true;
            } else {
                row.mean_ratio_to_exact = 0.0;
            }
            row.flag = partial ? "partial" : budget ? "budget" : "";
            rows.push_back(row);
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "n,degree,method,mean_time_s,mean_distance,mean_grasps,mean_ratio_to_exact,flag\n";
    for (const BenchRow& r : rows) {
        os << r.n << ",";
        if (r.has_degree) os << format_short(r.degree);
        os << "," << r.method << "," << format_fixed(r.mean_time_s, 6) << ","
           << format_short(r.mean_distance) << "," << format_short(r.mean_grasps) << ",";
        if (r.has_ratio) os << format_fixed(r.mean_ratio_to_exact, 6);
        os << "," << r.flag << "\n";
    }
    return os.str();
}

}  // namespace tabletop
