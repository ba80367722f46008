#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sglig/graph.hpp"

namespace sglig {

enum class ScenarioKind { two_class, bipartite, random, blockwise, band };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

/// Parameters of the synthetic graph families. Defaults reproduce the
/// published simulation settings at p = 100.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::two_class;
    Index p = 100;
    std::uint64_t seed = 1;

    double edge_value = 0.5;

    // two_class: first `active_size` nodes are the active class.
    Index active_size = 20;
    double active_prob = 0.1;
    double inactive_prob = 0.05;

    // bipartite: U = first `u_size` nodes.
    Index u_size = 20;
    double bipartite_prob = 0.1;

    // random
    double random_prob = 0.05;

    // blockwise
    Index block_count = 3;
    Index block_size = 10;
    double block_prob = 0.5;

    // band
    double band_diagonal = 1.333;
    double band_offdiagonal = -0.667;

    void validate() const;
};

struct SyntheticProblem {
    ScenarioSpec spec;
    Matrix b;
    double delta = 0.0;
    Matrix omega;   ///< unit-diagonal precision
    Matrix sigma;   ///< omega^{-1}
    UndirectedGraph graph;
    Vector cross_cov;
    Vector beta_true;
    std::vector<Index> support;  ///< nodes with nonzero cross-covariance, sorted
};

/// Per-column affine map fitted on training rows.
struct Standardization {
    Vector x_mean;
    Vector x_scale;
    std::vector<bool> constant;
    double y_mean = 0.0;
    double y_scale = 1.0;
    bool y_constant = false;
};

struct Dataset {
    Matrix x;
    Vector y;
    std::optional<Standardization> standardization;

    Index n() const noexcept { return x.rows(); }
    Index p() const noexcept { return x.cols(); }
};

Matrix build_b(const ScenarioSpec& spec);

/// Shift delta with cond(B + delta I) = target_cond.
double delta_for_condition(const Matrix& b, double target_cond);

Matrix standardize_unit_diagonal(const Matrix& omega_raw);

SyntheticProblem make_problem(const ScenarioSpec& spec, Index n_signal = 4, double c_value = 4.0);

Dataset sample_dataset(const SyntheticProblem& problem, Index n, double noise_sd, std::uint64_t seed);

/// Centres and scales X and y with statistics from `train_rows` only, applied to every row.
/// Columns with SD below 1e-12 are only centred and flagged constant.
Dataset standardize(const Dataset& data, const std::vector<Index>& train_rows);

Matrix take_rows(const Matrix& m, const std::vector<Index>& rows);
Vector take_rows(const Vector& v, const std::vector<Index>& rows);

} // namespace sglig
