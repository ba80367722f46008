#include "sglig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sglig/numerics.hpp"

namespace sglig {

namespace {

constexpr double kStandardizeFloor = 1e-12;

void check_prob(double prob, const char* name) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

} // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::two_class: return "two_class";
    case ScenarioKind::bipartite: return "bipartite";
    case ScenarioKind::random: return "random";
    case ScenarioKind::blockwise: return "blockwise";
    case ScenarioKind::band: return "band";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    for (auto k : {ScenarioKind::two_class, ScenarioKind::bipartite, ScenarioKind::random,
                   ScenarioKind::blockwise, ScenarioKind::band}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidArgument("unknown scenario kind '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
    if (p < 2) throw InvalidArgument("scenario needs p >= 2");
    check_prob(active_prob, "active_prob");
    check_prob(inactive_prob, "inactive_prob");
    check_prob(bipartite_prob, "bipartite_prob");
    check_prob(random_prob, "random_prob");
    check_prob(block_prob, "block_prob");
    switch (kind) {
    case ScenarioKind::two_class:
        if (active_size < 0 || active_size > p) throw InvalidArgument("two_class: active class larger than p");
        break;
    case ScenarioKind::bipartite:
        if (u_size < 1 || u_size >= p) throw InvalidArgument("bipartite: need 1 <= |U| < p");
        break;
    case ScenarioKind::blockwise:
        if (block_count < 1 || block_size < 1 || block_count * block_size > p) {
            throw InvalidArgument("blockwise: blocks need " + std::to_string(block_count * block_size) +
                                  " nodes but p = " + std::to_string(p));
        }
        break;
    case ScenarioKind::random:
    case ScenarioKind::band: break;
    }
}

Matrix build_b(const ScenarioSpec& spec) {
    spec.validate();
    const Index p = spec.p;
    Matrix b = Matrix::Zero(p, p);

    if (spec.kind == ScenarioKind::band) {
        for (Index i = 0; i < p; ++i) {
            b(i, i) = spec.band_diagonal;
            if (i + 1 < p) b(i, i + 1) = b(i + 1, i) = spec.band_offdiagonal;
        }
        return b;
    }

    auto edge_prob = [&](Index i, Index j) -> double {
        // i < j throughout.
        switch (spec.kind) {
        case ScenarioKind::two_class:
            return i < spec.active_size ? spec.active_prob : spec.inactive_prob;
        case ScenarioKind::bipartite:
            return (i < spec.u_size && j >= spec.u_size) ? spec.bipartite_prob : 0.0;
        case ScenarioKind::random:
            return spec.random_prob;
        case ScenarioKind::blockwise: {
            const Index covered = spec.block_count * spec.block_size;
            if (j >= covered) return 0.0;
            return i / spec.block_size == j / spec.block_size ? spec.block_prob : 0.0;
        }
        case ScenarioKind::band: break;
        }
        return 0.0;
    };

    Rng rng = Rng(spec.seed).split(0);
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            const double prob = edge_prob(i, j);
            if (prob > 0.0 && rng.bernoulli(prob)) b(i, j) = b(j, i) = spec.edge_value;
        }
    }
    return b;
}

double delta_for_condition(const Matrix& b, double target_cond) {
    if (!(target_cond > 1.0)) throw InvalidArgument("target condition number must exceed 1");
    const auto eig = extreme_eigs_sym(b);
    const double scale = std::max({1.0, std::abs(eig.max), std::abs(eig.min)});
    if (eig.max - eig.min <= 1e-12 * scale) {
        throw DegenerateSpectrum("matrix has a single eigenvalue; no shift reaches the target condition");
    }
    return (eig.max - target_cond * eig.min) / (target_cond - 1.0);
}

Matrix standardize_unit_diagonal(const Matrix& omega_raw) {
    if (omega_raw.rows() != omega_raw.cols()) throw InvalidArgument("matrix must be square");
    const Vector d = omega_raw.diagonal();
    if ((d.array() <= 0.0).any()) throw InvalidArgument("diagonal entries must be positive");
    const Vector inv_sqrt = d.cwiseSqrt().cwiseInverse();
    Matrix out = inv_sqrt.asDiagonal() * omega_raw * inv_sqrt.asDiagonal();
    out.diagonal().setOnes();
    return out;
}

SyntheticProblem make_problem(const ScenarioSpec& spec, Index n_signal, double c_value) {
    if (n_signal < 0 || n_signal > spec.p) throw InvalidArgument("n_signal must lie in [0, p]");
    SyntheticProblem prob;
    prob.spec = spec;
    prob.b = build_b(spec);
    prob.delta = delta_for_condition(prob.b, static_cast<double>(spec.p));
    Matrix raw = prob.b;
    raw.diagonal().array() += prob.delta;
    prob.omega = standardize_unit_diagonal(raw);
    prob.sigma = inverse_spd(prob.omega);
    prob.graph = graph_from_precision(prob.omega, 1e-10);

    // Partial Fisher-Yates over all nodes.
    Rng rng = Rng(spec.seed).split(1);
    std::vector<Index> nodes(static_cast<std::size_t>(spec.p));
    std::iota(nodes.begin(), nodes.end(), Index{0});
    for (Index k = 0; k < n_signal; ++k) {
        const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.p - k)));
        std::swap(nodes[k], nodes[pick]);
    }
    prob.support.assign(nodes.begin(), nodes.begin() + n_signal);
    std::sort(prob.support.begin(), prob.support.end());

    prob.cross_cov = Vector::Zero(spec.p);
    for (Index i : prob.support) prob.cross_cov[i] = c_value;
    prob.beta_true = prob.omega * prob.cross_cov;
    return prob;
}

Dataset sample_dataset(const SyntheticProblem& problem, Index n, double noise_sd, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("sample size must be positive");
    if (noise_sd < 0) throw InvalidArgument("noise_sd must be nonnegative");
    const Index p = problem.sigma.rows();
    const Matrix l = cholesky(problem.sigma);

    Rng rng(seed);
    Rng noise = rng.split(1);
    Matrix z(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) z(i, j) = rng.normal();

    Dataset data;
    data.x = z * l.transpose();
    data.y = data.x * problem.beta_true;
    for (Index i = 0; i < n; ++i) data.y[i] += noise_sd * noise.normal();
    return data;
}

Matrix take_rows(const Matrix& m, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = m.row(rows[k]);
    return out;
}

Vector take_rows(const Vector& v, const std::vector<Index>& rows) {
    Vector out(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) out[static_cast<Index>(k)] = v[rows[k]];
    return out;
}

Dataset standardize(const Dataset& data, const std::vector<Index>& train_rows) {
    if (train_rows.size() < 2) throw InvalidArgument("standardize needs at least two training rows");
    for (Index r : train_rows)
        if (r < 0 || r >= data.n()) throw InvalidArgument("training row index out of range");

    const Matrix xt = take_rows(data.x, train_rows);
    const Vector yt = take_rows(data.y, train_rows);
    const double denom = static_cast<double>(train_rows.size() - 1);

    Standardization s;
    s.x_mean = xt.colwise().mean().transpose();
    s.x_scale = Vector::Ones(data.p());
    s.constant.assign(static_cast<std::size_t>(data.p()), false);
    for (Index j = 0; j < data.p(); ++j) {
        const double sd = std::sqrt((xt.col(j).array() - s.x_mean[j]).square().sum() / denom);
        if (sd < kStandardizeFloor) {
            s.constant[j] = true;
        } else {
            s.x_scale[j] = sd;
        }
    }
    s.y_mean = yt.mean();
    const double ysd = std::sqrt((yt.array() - s.y_mean).square().sum() / denom);
    if (ysd < kStandardizeFloor) {
        s.y_constant = true;
    } else {
        s.y_scale = ysd;
    }

    Dataset out;
    out.x = (data.x.rowwise() - s.x_mean.transpose()) * s.x_scale.cwiseInverse().asDiagonal();
    out.y = (data.y.array() - s.y_mean) / s.y_scale;
    out.standardization = std::move(s);
    return out;
}

} // namespace sglig
