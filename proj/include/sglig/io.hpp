#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "sglig/eval.hpp"
#include "sglig/graph_est.hpp"
#include "sglig/synth.hpp"

namespace sglig::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that round-trips the value.
std::string format_double(double v);

/// Header `x0,...,x{p-1},y`; one row per observation.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Header `i,j`, one edge per row with i < j.
void write_graph_csv(std::ostream& out, const UndirectedGraph& g);
void write_graph_csv(const std::filesystem::path& path, const UndirectedGraph& g);
/// Header `i,j,count` with every tallied pair.
void write_edge_counts_csv(std::ostream& out, const EdgeCounts& counts);
void write_edge_counts_csv(const std::filesystem::path& path, const EdgeCounts& counts);

struct GraphFile {
    std::vector<Edge> edges;
    Index max_node = -1;
};
/// Accepts either edge orientation and an optional third `count` column.
GraphFile read_graph_edges(std::istream& in);
GraphFile read_graph_edges(const std::filesystem::path& path);
/// Throws if an edge references a node >= p.
UndirectedGraph read_graph_csv(const std::filesystem::path& path, Index p);

nlohmann::json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j, ScenarioSpec base = {});
/// {spec, delta, support, beta_true, edges}
nlohmann::json problem_to_json(const SyntheticProblem& problem);
nlohmann::json report_to_json(const TuningReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace sglig::io
