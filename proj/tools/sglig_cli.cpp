#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sglig/eval.hpp"
#include "sglig/graph_est.hpp"
#include "sglig/io.hpp"
#include "sglig/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sglig;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

/// Bad configuration or arguments; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::uint64_t seed = 1;
    fs::path out = "out";
    unsigned threads = default_thread_count();

    ScenarioSpec scenario;
    Index parents = 10;
    Index reps = 10;
    Index n = 560;
    double noise_sd = 5.0;

    std::vector<std::string> models{"srig", "sglig", "dsrig"};
    GridConfig grid;
    std::string weights = "auto";
    SolverConfig solver;
    double radius_factor = 2.0;

    std::string split_kind = "fixed";
    Index n_train = 80;
    Index n_val = 80;
    Index n_test = 400;
    Index segments = 10;

    MbConfig mb;
    std::string graph = "estimate";
    std::vector<fs::path> data;
    std::vector<fs::path> graphs;
    Index threshold = 70;
    std::optional<Index> total;
    std::optional<Index> p;
};

template <class T>
void read_key(const json& j, const char* key, T& field) {
    if (j.contains(key)) j.at(key).get_to(field);
}

void apply_json(Settings& s, const json& j) {
    read_key(j, "seed", s.seed);
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
    read_key(j, "threads", s.threads);
    if (j.contains("scenario")) s.scenario = io::scenario_from_json(j.at("scenario"), s.scenario);
    if (j.contains("simulate")) {
        const auto& b = j.at("simulate");
        read_key(b, "parents", s.parents);
        read_key(b, "reps", s.reps);
        read_key(b, "n", s.n);
        read_key(b, "noise_sd", s.noise_sd);
    }
    read_key(j, "models", s.models);
    if (j.contains("model")) s.models = {j.at("model").get<std::string>()};
    if (j.contains("grid")) {
        const auto& b = j.at("grid");
        read_key(b, "n_lambda", s.grid.n_lambda);
        read_key(b, "n_xi", s.grid.n_xi);
        read_key(b, "n_alpha", s.grid.n_alpha);
        read_key(b, "c", s.grid.c);
        read_key(b, "xi_max", s.grid.xi_max);
        read_key(b, "lambda_min_ratio", s.grid.lambda_min_ratio);
        read_key(b, "alpha_min", s.grid.alpha_min);
    }
    read_key(j, "weights", s.weights);
    if (j.contains("solver")) {
        const auto& b = j.at("solver");
        read_key(b, "max_iter", s.solver.max_iter);
        read_key(b, "tol", s.solver.tol);
        read_key(b, "step_scale", s.solver.step_scale);
        read_key(b, "radius_factor", s.radius_factor);
        if (b.contains("projector")) {
            s.solver.projector.method = parse_projection_method(b.at("projector").get<std::string>());
        }
        read_key(b, "projector_tol", s.solver.projector.tol);
        read_key(b, "projector_max_iter", s.solver.projector.max_iter);
    }
    if (j.contains("split")) {
        const auto& b = j.at("split");
        read_key(b, "kind", s.split_kind);
        read_key(b, "n_train", s.n_train);
        read_key(b, "n_val", s.n_val);
        read_key(b, "n_test", s.n_test);
        read_key(b, "segments", s.segments);
    }
    if (j.contains("mb")) {
        const auto& b = j.at("mb");
        read_key(b, "lambda", s.mb.lambda);
        if (b.contains("rule")) s.mb.rule = parse_rule(b.at("rule").get<std::string>());
        read_key(b, "tol", s.mb.cd_tol);
        read_key(b, "max_sweeps", s.mb.cd_max_sweeps);
    }
    read_key(j, "graph", s.graph);
    if (j.contains("data")) {
        s.data.clear();
        for (const auto& d : j.at("data")) s.data.emplace_back(d.get<std::string>());
    }
    if (j.contains("graphs")) {
        s.graphs.clear();
        for (const auto& d : j.at("graphs")) s.graphs.emplace_back(d.get<std::string>());
    }
    if (j.contains("consensus")) {
        const auto& b = j.at("consensus");
        read_key(b, "threshold", s.threshold);
        if (b.contains("total")) s.total = b.at("total").get<Index>();
        if (b.contains("p")) s.p = b.at("p").get<Index>();
    }
}

/// Command-line flags are applied on top of the JSON config, so they win.
class Overrides {
public:
    template <class T>
    CLI::Option* add(CLI::App* app, const std::string& name, const std::string& help,
                     std::function<void(Settings&, const T&)> set) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app->add_option(name, *value, help);
        setters_.push_back([opt, value, set](Settings& s) {
            if (opt->count() > 0) set(s, *value);
        });
        return opt;
    }
    void apply(Settings& s) const {
        for (const auto& f : setters_) f(s);
    }

private:
    std::vector<std::function<void(Settings&)>> setters_;
};

SplitScheme split_scheme(const Settings& s, std::uint64_t seed) {
    if (s.split_kind == "fixed") return SplitScheme::fixed(s.n_train, s.n_val, s.n_test, seed);
    if (s.split_kind == "permutations") return SplitScheme::permutations(s.segments, seed);
    throw UsageError("unknown split kind '" + s.split_kind + "' (expected fixed or permutations)");
}

TuneOptions tune_options(const Settings& s) {
    TuneOptions t;
    t.grid = s.grid;
    t.solver = s.solver;
    t.radius_factor = s.radius_factor;
    t.weights = parse_weight_rule(s.weights);
    t.threads = 1;
    return t;
}

std::vector<ModelKind> model_kinds(const Settings& s) {
    if (s.models.empty()) throw UsageError("no models selected");
    std::vector<ModelKind> out;
    for (const auto& m : s.models) out.push_back(parse_model_kind(m));
    return out;
}

void write_csv(const fs::path& path, const std::string& header, const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << header << '\n';
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
        os << '\n';
    }
    io::write_text(path, os.str());
}

std::string fmt(double v) { return io::format_double(v); }
std::string fmt(Index v) { return std::to_string(v); }

/// Graph estimated on the standardized training rows of one split.
UndirectedGraph estimate_graph(const Dataset& data, const Split& split, const MbConfig& mb) {
    const Dataset sd = standardize(data, split.train);
    return mb_estimate(take_rows(sd.x, split.train), mb);
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Settings& s) {
    if (s.parents < 1 || s.reps < 1 || s.n < 1) throw UsageError("parents, reps and n must be positive");
    s.scenario.validate();
    const std::string name(to_string(s.scenario.kind));
    const fs::path final_dir = s.out / name;
    const fs::path staging = s.out / ("." + name + ".partial");
    fs::remove_all(staging);
    try {
        const Index total = s.parents * s.reps;
        parallel_for(static_cast<std::size_t>(total), s.threads, [&](std::size_t k) {
            const Index g = static_cast<Index>(k) / s.reps;
            const Index r = static_cast<Index>(k) % s.reps;
            ScenarioSpec spec = s.scenario;
            spec.seed = s.seed + static_cast<std::uint64_t>(g);
            const SyntheticProblem problem = make_problem(spec);
            const Dataset data = sample_dataset(problem, s.n, s.noise_sd, s.seed + 100'000 + k);
            const fs::path dir = staging / ("parent" + std::to_string(g)) / ("rep" + std::to_string(r));
            fs::create_directories(dir);
            io::write_text(dir / "problem.json", io::problem_to_json(problem).dump(2) + "\n");
            io::write_dataset_csv(dir / "data.csv", data);
            io::write_graph_csv(dir / "graph.csv", problem.graph);
        });
        fs::remove_all(final_dir);
        fs::rename(staging, final_dir);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
    std::cout << "wrote " << s.parents * s.reps << " datasets to " << final_dir.string() << '\n';
    return 0;
}

// ---------------------------------------------------------- estimate-graph

int cmd_estimate_graph(const Settings& s, const fs::path& graph_out) {
    if (s.data.size() != 1) throw UsageError("estimate-graph needs exactly one --data file");
    const Dataset data = io::read_dataset_csv(s.data.front());
    std::vector<Index> rows(static_cast<std::size_t>(data.n()));
    std::iota(rows.begin(), rows.end(), Index{0});
    MbConfig mb = s.mb;
    mb.threads = s.threads;
    const UndirectedGraph g = estimate_graph(data, Split{rows, {}, {}}, mb);
    const fs::path path = graph_out.empty() ? s.out / "graph.csv" : graph_out;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    io::write_graph_csv(path, g);
    std::cout << g.edge_count() << " edges written to " << path.string() << '\n';
    return 0;
}

// -------------------------------------------------------------------- tune

struct RunRecord {
    std::string dataset;
    ModelKind model;
    Index split = 0;
    Index p = 0;
    Index edges = 0;
    std::optional<double> l2;
    double mse = 0.0;
    double seconds = 0.0;
    std::string error;
};

struct Aggregate {
    Index runs = 0;
    double l2 = 0.0;
    Index l2_count = 0;
    double mse = 0.0;
    double seconds = 0.0;
    double edges = 0.0;
    Index p = 0;
};

std::map<ModelKind, Aggregate> aggregate(const std::vector<RunRecord>& runs) {
    std::map<ModelKind, Aggregate> out;
    for (const auto& r : runs) {
        if (!r.error.empty()) continue;
        Aggregate& a = out[r.model];
        ++a.runs;
        if (r.l2) {
            a.l2 += *r.l2;
            ++a.l2_count;
        }
        a.mse += r.mse;
        a.seconds += r.seconds;
        a.edges += static_cast<double>(r.edges);
        a.p = r.p;
    }
    return out;
}

std::string mean_or_empty(double sum, Index count) { return count > 0 ? fmt(sum / static_cast<double>(count)) : ""; }

std::vector<std::string> run_row(const RunRecord& r) {
    return {r.dataset,       std::string(to_string(r.model)), fmt(r.split),   fmt(r.p), fmt(r.edges),
            r.l2 ? fmt(*r.l2) : "", r.error.empty() ? fmt(r.mse) : "", fmt(r.seconds), r.error};
}

const char* kRunHeader = "dataset,model,split,p,edges,l2_distance,mse,seconds,error";

/// Optional truth stored next to a simulated dataset.
std::optional<Vector> truth_for(const fs::path& data_path) {
    const fs::path problem = data_path.parent_path() / "problem.json";
    if (!fs::exists(problem)) return std::nullopt;
    std::ifstream in(problem);
    const json j = json::parse(in);
    const auto beta = j.at("beta_true").get<std::vector<double>>();
    return Eigen::Map<const Vector>(beta.data(), static_cast<Index>(beta.size()));
}

std::string dataset_label(const fs::path& data_path) {
    std::string label = data_path.parent_path().string() + "/" + data_path.stem().string();
    for (char& c : label)
        if (c == '/' || c == '\\' || c == ',') c = '_';
    while (!label.empty() && (label.front() == '_' || label.front() == '.')) label.erase(label.begin());
    return label;
}

int cmd_tune(const Settings& s) {
    if (s.data.empty()) throw UsageError("tune needs at least one --data file");
    const auto kinds = model_kinds(s);
    const TuneOptions opts = tune_options(s);
    fs::create_directories(s.out / "runs");
    if (s.graph == "estimate") fs::create_directories(s.out / "graphs");

    std::vector<std::vector<RunRecord>> per_dataset(s.data.size());
    std::mutex log_mutex;
    std::atomic<Index> failed{0};

    parallel_for(s.data.size(), s.threads, [&](std::size_t d) {
        const fs::path& path = s.data[d];
        const std::string label = dataset_label(path);
        try {
            const Dataset data = io::read_dataset_csv(path);
            const auto truth = truth_for(path);
            if (truth && truth->size() != data.p()) throw InvalidArgument("problem.json beta_true length mismatch");
            std::optional<UndirectedGraph> fixed_graph;
            if (s.graph == "true") {
                fixed_graph = io::read_graph_csv(path.parent_path() / "graph.csv", data.p());
            } else if (s.graph != "estimate") {
                fixed_graph = io::read_graph_csv(s.graph, data.p());
            }
            const auto splits = make_splits(data.n(), split_scheme(s, s.seed + d));
            for (std::size_t k = 0; k < splits.size(); ++k) {
                const UndirectedGraph g = fixed_graph ? *fixed_graph : estimate_graph(data, splits[k], s.mb);
                if (!fixed_graph) {
                    io::write_graph_csv(s.out / "graphs" / (label + "_split" + std::to_string(k) + ".csv"), g);
                }
                for (ModelKind kind : kinds) {
                    RunRecord rec{label, kind, static_cast<Index>(k), data.p(), g.edge_count(), {}, 0.0, 0.0, {}};
                    try {
                        const TuningReport rep = tune(data, g, kind, splits[k], opts, truth ? &*truth : nullptr);
                        rec.l2 = rep.l2_distance;
                        rec.mse = rep.test_mse;
                        rec.seconds = rep.wall_time;
                        json j = io::report_to_json(rep);
                        j["dataset"] = path.string();
                        j["split"] = k;
                        j["edges"] = g.edge_count();
                        io::write_text(s.out / "runs" /
                                           (label + "_" + std::string(to_string(kind)) + "_split" +
                                            std::to_string(k) + ".json"),
                                       j.dump(2) + "\n");
                    } catch (const std::exception& e) {
                        rec.error = e.what();
                    }
                    per_dataset[d].push_back(std::move(rec));
                }
            }
        } catch (const std::exception& e) {
            ++failed;
            std::lock_guard lock(log_mutex);
            std::cerr << "dataset " << path.string() << " failed: " << e.what() << '\n';
        }
    });

    std::vector<RunRecord> runs;
    for (auto& v : per_dataset) runs.insert(runs.end(), v.begin(), v.end());
    std::vector<std::vector<std::string>> rows;
    Index run_failures = 0;
    for (const auto& r : runs) {
        rows.push_back(run_row(r));
        if (!r.error.empty()) {
            ++run_failures;
            std::cerr << "run " << r.dataset << " " << to_string(r.model) << " split " << r.split
                      << " failed: " << r.error << '\n';
        }
    }
    write_csv(s.out / "runs.csv", kRunHeader, rows);

    std::vector<std::vector<std::string>> summary;
    for (const auto& [kind, a] : aggregate(runs)) {
        summary.push_back({std::string(to_string(kind)), fmt(a.runs), mean_or_empty(a.l2, a.l2_count),
                           mean_or_empty(a.mse, a.runs), mean_or_empty(a.seconds, a.runs)});
    }
    write_csv(s.out / "summary.csv", "model,runs,mean_l2,mean_mse,mean_seconds", summary);

    const bool all_failed = failed == static_cast<Index>(s.data.size()) ||
                            (!runs.empty() && run_failures == static_cast<Index>(runs.size()));
    if (failed > 0 || run_failures > 0) {
        std::cerr << failed << " dataset(s) and " << run_failures << " run(s) failed\n";
    }
    return all_failed ? kExitRuntime : 0;
}

// --------------------------------------------------------------- consensus

int cmd_consensus(const Settings& s) {
    if (s.graphs.empty()) throw UsageError("consensus needs at least one --graphs file");
    if (s.total && *s.total != static_cast<Index>(s.graphs.size())) {
        throw UsageError("--total is " + std::to_string(*s.total) + " but " + std::to_string(s.graphs.size()) +
                         " graph files were given");
    }
    std::vector<io::GraphFile> files;
    Index max_node = -1;
    for (const auto& path : s.graphs) {
        files.push_back(io::read_graph_edges(path));
        max_node = std::max(max_node, files.back().max_node);
    }
    const Index p = s.p ? *s.p : max_node + 1;
    std::vector<UndirectedGraph> graphs;
    for (std::size_t k = 0; k < files.size(); ++k) {
        if (files[k].max_node >= p) {
            throw InvalidArgument("graph " + s.graphs[k].string() + " references node " +
                                  std::to_string(files[k].max_node) + " but p = " + std::to_string(p));
        }
        graphs.emplace_back(p, files[k].edges);
    }
    const auto res = consensus(graphs, s.threshold);
    fs::create_directories(s.out);
    io::write_edge_counts_csv(s.out / "edge_counts.csv", res.counts);
    io::write_graph_csv(s.out / "consensus_graph.csv", res.graph);
    std::cout << res.graph.edge_count() << " edges appear in more than " << s.threshold << " of " << graphs.size()
              << " graphs\n";
    return 0;
}

// --------------------------------------------------------------- benchmark

int cmd_benchmark(const Settings& s) {
    if (s.parents < 1 || s.reps < 1) throw UsageError("parents and reps must be positive");
    s.scenario.validate();
    const auto kinds = model_kinds(s);
    const TuneOptions opts = tune_options(s);
    if (s.graph != "estimate" && s.graph != "true") throw UsageError("benchmark --graph must be estimate or true");

    const Index total = s.parents * s.reps;
    std::vector<std::vector<RunRecord>> per_dataset(static_cast<std::size_t>(total));
    std::atomic<Index> failed{0};
    std::mutex log_mutex;
    const std::string scenario(to_string(s.scenario.kind));

    // Datasets run concurrently; each tune stays single-threaded so timings compare fairly.
    parallel_for(static_cast<std::size_t>(total), s.threads, [&](std::size_t k) {
        const Index g = static_cast<Index>(k) / s.reps;
        const Index r = static_cast<Index>(k) % s.reps;
        const std::string label = "parent" + std::to_string(g) + "_rep" + std::to_string(r);
        try {
            ScenarioSpec spec = s.scenario;
            spec.seed = s.seed + static_cast<std::uint64_t>(g);
            const SyntheticProblem problem = make_problem(spec);
            const Dataset data = sample_dataset(problem, s.n, s.noise_sd, s.seed + 100'000 + k);
            const Split split = make_splits(data.n(), split_scheme(s, s.seed + k)).front();
            const UndirectedGraph graph = s.graph == "true" ? problem.graph : estimate_graph(data, split, s.mb);
            for (ModelKind kind : kinds) {
                RunRecord rec{label, kind, 0, data.p(), graph.edge_count(), {}, 0.0, 0.0, {}};
                try {
                    const TuningReport rep = tune(data, graph, kind, split, opts, &problem.beta_true);
                    rec.l2 = rep.l2_distance;
                    rec.mse = rep.test_mse;
                    rec.seconds = rep.wall_time;
                } catch (const std::exception& e) {
                    rec.error = e.what();
                }
                per_dataset[k].push_back(std::move(rec));
            }
        } catch (const std::exception& e) {
            ++failed;
            std::lock_guard lock(log_mutex);
            std::cerr << "dataset " << label << " failed: " << e.what() << '\n';
        }
    });

    std::vector<RunRecord> runs;
    for (auto& v : per_dataset) runs.insert(runs.end(), v.begin(), v.end());
    fs::create_directories(s.out);
    std::vector<std::vector<std::string>> rows;
    Index run_failures = 0;
    for (const auto& r : runs) {
        auto row = run_row(r);
        row.insert(row.begin(), scenario);
        rows.push_back(std::move(row));
        run_failures += !r.error.empty();
    }
    write_csv(s.out / "benchmark_runs.csv", std::string("scenario,") + kRunHeader, rows);

    std::vector<std::vector<std::string>> summary;
    const auto agg = aggregate(runs);
    for (ModelKind kind : kinds) {
        const auto it = agg.find(kind);
        if (it == agg.end()) continue;
        const Aggregate& a = it->second;
        summary.push_back({scenario, std::string(to_string(kind)), fmt(a.p), mean_or_empty(a.edges, a.runs),
                           mean_or_empty(a.l2, a.l2_count), mean_or_empty(a.mse, a.runs),
                           mean_or_empty(a.seconds, a.runs)});
    }
    write_csv(s.out / "benchmark_summary.csv", "scenario,model,p,edges,mean_l2,mean_mse,mean_seconds", summary);
    for (const auto& row : summary) {
        std::cout << row[1] << ": l2 " << row[4] << ", mse " << row[5] << ", seconds " << row[6] << '\n';
    }
    if (failed > 0 || run_failures > 0) {
        std::cerr << failed << " dataset(s) and " << run_failures << " run(s) failed\n";
    }
    const bool all_failed = failed == total || (!runs.empty() && run_failures == static_cast<Index>(runs.size()));
    return all_failed ? kExitRuntime : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-structured sparse regression (SRIG, DSRIG, SGLIG) toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides ov;

    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file; command-line flags take precedence")
        ->check(CLI::ExistingFile);
    ov.add<std::uint64_t>(&app, "--seed", "Base seed", [](Settings& s, const auto& v) { s.seed = v; });
    ov.add<std::string>(&app, "--out", "Output directory", [](Settings& s, const auto& v) { s.out = v; });
    ov.add<unsigned>(&app, "--threads", "Worker threads", [](Settings& s, const auto& v) { s.threads = v; })
        ->check(CLI::PositiveNumber);

    auto scenario_flags = [&](CLI::App* sub) {
        ov.add<std::string>(sub, "--scenario", "two_class, bipartite, random, blockwise or band",
                            [](Settings& s, const auto& v) { s.scenario.kind = parse_scenario_kind(v); });
        ov.add<Index>(sub, "--p", "Number of predictors", [](Settings& s, const auto& v) { s.scenario.p = v; });
        ov.add<Index>(sub, "--parents", "Parent graphs", [](Settings& s, const auto& v) { s.parents = v; });
        ov.add<Index>(sub, "--reps", "Datasets per parent graph", [](Settings& s, const auto& v) { s.reps = v; });
        ov.add<Index>(sub, "--n", "Rows per dataset", [](Settings& s, const auto& v) { s.n = v; });
        ov.add<double>(sub, "--noise-sd", "Noise standard deviation",
                       [](Settings& s, const auto& v) { s.noise_sd = v; });
    };
    auto mb_flags = [&](CLI::App* sub) {
        ov.add<double>(sub, "--mb-lambda", "Neighbourhood-selection LASSO penalty",
                       [](Settings& s, const auto& v) { s.mb.lambda = v; });
        ov.add<std::string>(sub, "--rule", "Symmetrization rule: or, and",
                            [](Settings& s, const auto& v) { s.mb.rule = parse_rule(v); });
    };
    auto fit_flags = [&](CLI::App* sub) {
        ov.add<std::vector<std::string>>(sub, "--models", "Models to fit (srig sglig dsrig)",
                                         [](Settings& s, const auto& v) { s.models = v; });
        ov.add<Index>(sub, "--n-lambda", "Lambda grid size", [](Settings& s, const auto& v) { s.grid.n_lambda = v; });
        ov.add<Index>(sub, "--n-xi", "Xi grid size (dsrig)", [](Settings& s, const auto& v) { s.grid.n_xi = v; });
        ov.add<Index>(sub, "--n-alpha", "Alpha grid size (sglig)",
                      [](Settings& s, const auto& v) { s.grid.n_alpha = v; });
        ov.add<double>(sub, "--c", "sglig lambda* = lambda_max / c", [](Settings& s, const auto& v) { s.grid.c = v; });
        ov.add<double>(sub, "--xi-max", "Largest xi", [](Settings& s, const auto& v) { s.grid.xi_max = v; });
        ov.add<std::string>(sub, "--weights", "auto, inverse_cov or degree_scaled",
                            [](Settings& s, const auto& v) { s.weights = v; });
        ov.add<Index>(sub, "--max-iter", "Solver iteration cap",
                      [](Settings& s, const auto& v) { s.solver.max_iter = v; });
        ov.add<double>(sub, "--tol", "Solver tolerance", [](Settings& s, const auto& v) { s.solver.tol = v; });
        ov.add<std::string>(sub, "--projector", "two_stage_pocs or dykstra", [](Settings& s, const auto& v) {
            s.solver.projector = parse_projection_method(v) == ProjectionMethod::dykstra ? ProjectorKind::dykstra()
                                                                                         : ProjectorKind::pocs();
        });
        ov.add<double>(sub, "--radius-factor", "Dual radius multiplier (2 as in the Moreau derivation)",
                       [](Settings& s, const auto& v) { s.radius_factor = v; });
        ov.add<std::string>(sub, "--split", "fixed or permutations",
                            [](Settings& s, const auto& v) { s.split_kind = v; });
        ov.add<Index>(sub, "--n-train", "Training rows", [](Settings& s, const auto& v) { s.n_train = v; });
        ov.add<Index>(sub, "--n-val", "Validation rows", [](Settings& s, const auto& v) { s.n_val = v; });
        ov.add<Index>(sub, "--n-test", "Test rows", [](Settings& s, const auto& v) { s.n_test = v; });
        ov.add<Index>(sub, "--segments", "Segments for permutation splits",
                      [](Settings& s, const auto& v) { s.segments = v; });
        mb_flags(sub);
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Generate synthetic problems and datasets");
    scenario_flags(simulate);

    CLI::App* est = app.add_subcommand("estimate-graph", "Estimate a predictor graph by neighbourhood selection");
    ov.add<std::string>(est, "--data", "Dataset CSV", [](Settings& s, const auto& v) { s.data = {v}; });
    std::string graph_out;
    est->add_option("--graph-out", graph_out, "Output edge list (default <out>/graph.csv)");
    mb_flags(est);

    CLI::App* tune_cmd = app.add_subcommand("tune", "Tune models on datasets by validation MSE");
    ov.add<std::vector<std::string>>(tune_cmd, "--data", "Dataset CSV files", [](Settings& s, const auto& v) {
        s.data.assign(v.begin(), v.end());
    });
    ov.add<std::string>(tune_cmd, "--graph", "Edge-list CSV, 'true' (graph.csv beside each dataset) or 'estimate'",
                        [](Settings& s, const auto& v) { s.graph = v; });
    fit_flags(tune_cmd);

    CLI::App* cons = app.add_subcommand("consensus", "Aggregate graphs into edge counts and a consensus graph");
    ov.add<std::vector<std::string>>(cons, "--graphs", "Edge-list CSV files", [](Settings& s, const auto& v) {
        s.graphs.assign(v.begin(), v.end());
    });
    ov.add<Index>(cons, "--threshold", "Keep edges seen in more than this many graphs",
                  [](Settings& s, const auto& v) { s.threshold = v; });
    ov.add<Index>(cons, "--total", "Expected number of graphs", [](Settings& s, const auto& v) { s.total = v; });
    ov.add<Index>(cons, "--p", "Number of nodes (default: largest index + 1)",
                  [](Settings& s, const auto& v) { s.p = v; });

    CLI::App* bench = app.add_subcommand("benchmark", "Simulate, estimate graphs, tune and summarize");
    scenario_flags(bench);
    ov.add<std::string>(bench, "--graph", "estimate or true", [](Settings& s, const auto& v) { s.graph = v; });
    fit_flags(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    Settings settings;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            apply_json(settings, json::parse(in));
        }
        ov.apply(settings);
        if (settings.threads == 0) settings.threads = 1;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(settings);
        if (est->parsed()) return cmd_estimate_graph(settings, graph_out);
        if (tune_cmd->parsed()) return cmd_tune(settings);
        if (cons->parsed()) return cmd_consensus(settings);
        if (bench->parsed()) return cmd_benchmark(settings);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
