#include "sglig/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sglig {

namespace {

std::vector<double> inverse_cov_weights(const Matrix& x, const Vector& y, const std::vector<Index>* degrees) {
    if (x.rows() != y.size()) throw InvalidArgument("weights: X and y row counts differ");
    if (x.rows() < 2) throw InvalidArgument("weights: need at least two rows");
    if (degrees && static_cast<Index>(degrees->size()) != x.cols()) {
        throw InvalidArgument("weights: degree vector length differs from p");
    }
    const double n = static_cast<double>(x.rows());
    const Vector yc = y.array() - y.mean();
    std::vector<double> tau(static_cast<std::size_t>(x.cols()));
    for (Index j = 0; j < x.cols(); ++j) {
        const double cov = (x.col(j).array() - x.col(j).mean()).matrix().dot(yc) / (n - 1.0);
        const double numerator = degrees ? std::sqrt(static_cast<double>((*degrees)[j])) : 1.0;
        const double abs_cov = std::abs(cov);
        const double w = abs_cov > 0.0 ? numerator / abs_cov : kWeightCap;
        tau[j] = std::clamp(w, kWeightFloor, kWeightCap);
    }
    return tau;
}

std::vector<double> log_spaced_descending(double hi, double lo, Index count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = hi;
        return out;
    }
    const double lh = std::log(hi);
    const double ll = std::log(lo);
    for (Index k = 0; k < count; ++k) {
        out[k] = std::exp(lh + (ll - lh) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    out.front() = hi;
    out.back() = lo;
    return out;
}

} // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::srig: return "srig";
    case ModelKind::dsrig: return "dsrig";
    case ModelKind::sglig: return "sglig";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    for (auto k : {ModelKind::srig, ModelKind::dsrig, ModelKind::sglig})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
    const auto p = groups.size();
    if (weights.size() != p || degrees.size() != p) {
        throw InvalidArgument("model spec: weights, degrees and groups must have one entry per node");
    }
    if (!(params.lambda >= 0.0)) throw InvalidArgument("model spec: lambda must be nonnegative");
    if (!(params.xi >= 0.0)) throw InvalidArgument("model spec: xi must be nonnegative");
    if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) throw InvalidArgument("model spec: alpha must lie in [0, 1]");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("model spec: weights must be finite and positive");
}

std::vector<double> srig_weights(const Matrix& x, const Vector& y) { return inverse_cov_weights(x, y, nullptr); }

std::vector<double> dsrig_weights(const Matrix& x, const Vector& y, const std::vector<Index>& degrees) {
    return inverse_cov_weights(x, y, &degrees);
}

double lambda_max(const Matrix& x, const Vector& y, const UndirectedGraph& graph, const std::vector<double>& weights,
                  double radius_factor) {
    if (x.rows() != y.size() || x.cols() != graph.size() || static_cast<Index>(weights.size()) != x.cols()) {
        throw InvalidArgument("lambda_max: dimension mismatch");
    }
    if (!(radius_factor > 0.0)) throw InvalidArgument("lambda_max: radius factor must be positive");
    const Vector xty = x.transpose() * y;
    const double n = static_cast<double>(x.rows());
    double best = 0.0;
    for (Index i = 0; i < graph.size(); ++i) {
        const Neighborhood nb = neighborhood(graph, i);
        double sq = 0.0;
        for (Index j : nb.members) sq += xty[j] * xty[j];
        best = std::max(best, std::sqrt(sq) / (n * weights[i] * radius_factor));
    }
    return best;
}

TuningGrid build_grid(ModelKind kind, double lambda_max, const GridConfig& config) {
    if (!(lambda_max > 0.0)) throw InvalidArgument("build_grid: lambda_max must be positive");
    TuningGrid grid;
    grid.kind = kind;
    grid.lambda_max = lambda_max;

    switch (kind) {
    case ModelKind::srig: {
        if (config.n_lambda < 1) throw InvalidArgument("build_grid: n_lambda must be positive");
        grid.chains.emplace_back();
        for (double lam : log_spaced_descending(lambda_max, config.lambda_min_ratio * lambda_max, config.n_lambda)) {
            grid.chains.back().push_back(grid.size());
            grid.points.push_back({lam, 0.0, 1.0});
        }
        break;
    }
    case ModelKind::dsrig: {
        if (config.n_lambda < 1 || config.n_xi < 1) throw InvalidArgument("build_grid: grid sizes must be positive");
        const auto lambdas =
            log_spaced_descending(lambda_max, config.lambda_min_ratio * lambda_max, config.n_lambda);
        // xi in (0, xi_max], equally spaced, largest first.
        std::vector<double> xis(static_cast<std::size_t>(config.n_xi));
        for (Index k = 0; k < config.n_xi; ++k) {
            xis[k] = config.xi_max * static_cast<double>(config.n_xi - k) / static_cast<double>(config.n_xi);
        }
        grid.chains.resize(xis.size());
        for (std::size_t a = 0; a < lambdas.size(); ++a) {
            for (std::size_t b = 0; b < xis.size(); ++b) {
                grid.chains[b].push_back(grid.size());
                grid.points.push_back({lambdas[a], xis[b], 1.0});
            }
        }
        break;
    }
    case ModelKind::sglig: {
        if (config.n_alpha < 1) throw InvalidArgument("build_grid: n_alpha must be positive");
        if (!(config.c > 0.0)) throw InvalidArgument("build_grid: c must be positive");
        const double lambda_star = lambda_max / config.c;
        grid.chains.emplace_back();
        for (double alpha : log_spaced_descending(1.0, config.alpha_min, config.n_alpha)) {
            grid.chains.back().push_back(grid.size());
            grid.points.push_back({lambda_star, 0.0, alpha});
        }
        break;
    }
    }
    return grid;
}

GroupRadii radii_for(const ModelSpec& spec, double sigma, double radius_factor) {
    spec.validate();
    if (!(sigma > 0.0)) throw InvalidArgument("radii_for: sigma must be positive");
    if (!(radius_factor > 0.0)) throw InvalidArgument("radii_for: radius factor must be positive");

    GroupRadii radii;
    radii.groups = spec.groups;
    const std::size_t p = spec.groups.size();
    radii.tau_star.resize(p);
    radii.xi_star.resize(p);
    const double scale = radius_factor / sigma;
    const auto& par = spec.params;

    for (std::size_t i = 0; i < p; ++i) {
        double w2 = 0.0;
        double winf = 0.0;
        switch (spec.kind) {
        case ModelKind::srig:
            w2 = par.lambda * spec.weights[i];
            break;
        case ModelKind::dsrig:
            w2 = par.lambda * spec.weights[i];
            winf = par.lambda * par.xi;
            break;
        case ModelKind::sglig:
            w2 = par.lambda * par.alpha * spec.weights[i];
            winf = par.lambda * (1.0 - par.alpha) * std::sqrt(static_cast<double>(spec.degrees[i]));
            break;
        }
        if (w2 == 0.0 && winf == 0.0) {
            radii.tau_star[i] = 0.0;
            radii.xi_star[i] = 0.0;
        } else {
            radii.tau_star[i] = w2 > 0.0 ? scale * w2 : kUnconstrained;
            radii.xi_star[i] = winf > 0.0 ? scale * winf : kUnconstrained;
        }
    }
    return radii;
}

} // namespace sglig
