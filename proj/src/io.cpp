#include "sglig/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace sglig::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw IoError("line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
    }
    return v;
}

Index parse_index(const std::string& s, std::size_t line_no) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
        throw IoError("line " + std::to_string(line_no) + ": invalid node index '" + s + "'");
    }
    return static_cast<Index>(v);
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf, ptr);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (Index j = 0; j < data.p(); ++j) out << 'x' << j << ',';
    out << "y\n";
    for (Index i = 0; i < data.n(); ++i) {
        for (Index j = 0; j < data.p(); ++j) out << format_double(data.x(i, j)) << ',';
        out << format_double(data.y[i]) << '\n';
    }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
    auto out = open_out(path);
    write_dataset_csv(out, data);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("dataset CSV is empty");
    const auto header = split_fields(line);
    if (header.size() < 2 || header.back() != "y") throw IoError("dataset CSV header must end with column 'y'");
    const Index p = static_cast<Index>(header.size()) - 1;
    for (Index j = 0; j < p; ++j) {
        if (header[j] != "x" + std::to_string(j)) {
            throw IoError("dataset CSV header: expected 'x" + std::to_string(j) + "', found '" + header[j] + "'");
        }
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    Index rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (static_cast<Index>(fields.size()) != p + 1) {
            throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(p + 1) + " fields");
        }
        for (const auto& f : fields) values.push_back(parse_double(f, line_no));
        ++rows;
    }
    Dataset data;
    data.x.resize(rows, p);
    data.y.resize(rows);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < p; ++j) data.x(i, j) = values[static_cast<std::size_t>(i * (p + 1) + j)];
        data.y[i] = values[static_cast<std::size_t>(i * (p + 1) + p)];
    }
    return data;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_dataset_csv(in);
}

void write_graph_csv(std::ostream& out, const UndirectedGraph& g) {
    out << "i,j\n";
    for (const auto& [i, j] : g.edges()) out << i << ',' << j << '\n';
}

void write_graph_csv(const std::filesystem::path& path, const UndirectedGraph& g) {
    auto out = open_out(path);
    write_graph_csv(out, g);
}

void write_edge_counts_csv(std::ostream& out, const EdgeCounts& counts) {
    out << "i,j,count\n";
    for (const auto& [e, c] : counts.counts) out << e.first << ',' << e.second << ',' << c << '\n';
}

void write_edge_counts_csv(const std::filesystem::path& path, const EdgeCounts& counts) {
    auto out = open_out(path);
    write_edge_counts_csv(out, counts);
}

GraphFile read_graph_edges(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("graph CSV is empty");
    const auto header = split_fields(line);
    if (header.size() < 2 || header[0] != "i" || header[1] != "j" || header.size() > 3 ||
        (header.size() == 3 && header[2] != "count")) {
        throw IoError("graph CSV header must be 'i,j' or 'i,j,count'");
    }
    GraphFile gf;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) throw IoError("line " + std::to_string(line_no) + ": wrong field count");
        const Index i = parse_index(fields[0], line_no);
        const Index j = parse_index(fields[1], line_no);
        gf.edges.emplace_back(i, j);
        gf.max_node = std::max({gf.max_node, i, j});
    }
    return gf;
}

GraphFile read_graph_edges(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_graph_edges(in);
}

UndirectedGraph read_graph_csv(const std::filesystem::path& path, Index p) {
    const GraphFile gf = read_graph_edges(path);
    if (gf.max_node >= p) {
        throw IoError("graph '" + path.string() + "' references node " + std::to_string(gf.max_node) +
                      " but p = " + std::to_string(p));
    }
    return UndirectedGraph(p, gf.edges);
}

nlohmann::json to_json(const ScenarioSpec& s) {
    return {
        {"kind", std::string(to_string(s.kind))},
        {"p", s.p},
        {"seed", s.seed},
        {"edge_value", s.edge_value},
        {"active_size", s.active_size},
        {"active_prob", s.active_prob},
        {"inactive_prob", s.inactive_prob},
        {"u_size", s.u_size},
        {"bipartite_prob", s.bipartite_prob},
        {"random_prob", s.random_prob},
        {"block_count", s.block_count},
        {"block_size", s.block_size},
        {"block_prob", s.block_prob},
        {"band_diagonal", s.band_diagonal},
        {"band_offdiagonal", s.band_offdiagonal},
    };
}

ScenarioSpec scenario_from_json(const nlohmann::json& j, ScenarioSpec s) {
    if (j.contains("kind")) s.kind = parse_scenario_kind(j.at("kind").get<std::string>());
    auto read = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    read("p", s.p);
    read("seed", s.seed);
    read("edge_value", s.edge_value);
    read("active_size", s.active_size);
    read("active_prob", s.active_prob);
    read("inactive_prob", s.inactive_prob);
    read("u_size", s.u_size);
    read("bipartite_prob", s.bipartite_prob);
    read("random_prob", s.random_prob);
    read("block_count", s.block_count);
    read("block_size", s.block_size);
    read("block_prob", s.block_prob);
    read("band_diagonal", s.band_diagonal);
    read("band_offdiagonal", s.band_offdiagonal);
    s.validate();
    return s;
}

nlohmann::json problem_to_json(const SyntheticProblem& problem) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [i, j] : problem.graph.edges()) edges.push_back({i, j});
    return {
        {"spec", to_json(problem.spec)},
        {"delta", problem.delta},
        {"support", problem.support},
        {"beta_true", std::vector<double>(problem.beta_true.begin(), problem.beta_true.end())},
        {"edges", edges},
    };
}

nlohmann::json report_to_json(const TuningReport& r) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& e : r.entries) {
        nlohmann::json row = {
            {"lambda", e.params.lambda},
            {"xi", e.params.xi},
            {"alpha", e.params.alpha},
            {"val_mse", std::isfinite(e.val_mse) ? nlohmann::json(e.val_mse) : nlohmann::json(nullptr)},
            {"iterations", e.iterations},
            {"converged", e.converged},
            {"nonzero", e.nonzero},
        };
        if (!e.error.empty()) row["error"] = e.error;
        grid.push_back(std::move(row));
    }
    nlohmann::json out = {
        {"model", std::string(to_string(r.kind))},
        {"lambda_max", r.lambda_max},
        {"sigma", r.sigma},
        {"grid", std::move(grid)},
        {"best_index", r.best},
        {"best", {{"lambda", r.best_params.lambda}, {"xi", r.best_params.xi}, {"alpha", r.best_params.alpha}}},
        {"val_mse", r.val_mse},
        {"test_mse", r.test_mse},
        {"test_mse_std", r.test_mse_std},
        {"nonzero", r.nonzero},
        {"intercept", r.intercept},
        {"beta", std::vector<double>(r.beta.begin(), r.beta.end())},
        {"n_train", r.n_train},
        {"n_val", r.n_val},
        {"n_test", r.n_test},
        {"wall_time", r.wall_time},
    };
    out["l2_distance"] = r.l2_distance ? nlohmann::json(*r.l2_distance) : nlohmann::json(nullptr);
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace sglig::io
