#include "pat/diag/diagnostics.hpp"

#include "pat/model/mlp.hpp"

#include <cmath>
#include <random>

namespace pat::diag {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::optional<double> angle_deg(const RealVector& a, const RealVector& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    double c = a.dot(b) / (na * nb);
    c = std::max(-1.0, std::min(1.0, c));
    return std::acos(c) * 180.0 / kPi;
}

}  // namespace

std::optional<double> gradient_angle(const ad::GradientSet& g1, const ad::GradientSet& g2) {
    if (g1.per_layer.size() != g2.per_layer.size()) {
        throw DimensionError("gradient_angle: gradient sets have different layer counts");
    }
    return angle_deg(g1.flatten(), g2.flatten());
}

AlgorithmComparison compare_algorithms_at_point(const nn::PnnModel& model,
                                                const train::Dataset& data,
                                                const std::vector<std::size_t>& batch) {
    const auto g_ideal = train::batch_gradient(model, data, batch,
                                               train::exec_context(train::Algorithm::IdealBP));
    const auto g_pat =
        train::batch_gradient(model, data, batch, train::exec_context(train::Algorithm::PAT));
    const auto g_insl = train::batch_gradient(model, data, batch,
                                              train::exec_context(train::Algorithm::InSilico));

    AlgorithmComparison cmp;
    cmp.angle_pat_ideal_deg = gradient_angle(g_pat.grads, g_ideal.grads).value_or(0.0);
    cmp.angle_insilico_ideal_deg = gradient_angle(g_insl.grads, g_ideal.grads).value_or(0.0);
    const double n_ideal = g_ideal.grads.norm();
    cmp.magnitude_ratio_pat = n_ideal > 0.0 ? g_pat.grads.norm() / n_ideal : 0.0;
    cmp.magnitude_ratio_insilico = n_ideal > 0.0 ? g_insl.grads.norm() / n_ideal : 0.0;

    for (std::size_t i = 0; i < g_ideal.grads.per_layer.size(); ++i) {
        if (g_ideal.grads.per_layer[i].size() == 0) continue;
        cmp.per_layer_angle_pat.push_back(
            angle_deg(g_pat.grads.per_layer[i], g_ideal.grads.per_layer[i]).value_or(0.0));
        cmp.per_layer_angle_insilico.push_back(
            angle_deg(g_insl.grads.per_layer[i], g_ideal.grads.per_layer[i]).value_or(0.0));
    }
    return cmp;
}

LayerGapProfile layer_gap_profile(const nn::PnnModel& model, const RealVector& x) {
    using Fn = ad::ExecContext::Fn;
    const auto true_fwd = model.forward(x, {Fn::True, Fn::True});
    const auto model_fwd = model.forward(x, {Fn::Model, Fn::Model});

    LayerGapProfile p;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        if (dynamic_cast<const nn::PhysicalLayer*>(model.layers[i].get()) == nullptr) continue;
        const RealVector& xt = true_fwd.tapes[i].input;
        const RealVector& xm = model_fwd.tapes[i].input;
        const double denom = std::max(xt.norm(), 1e-300);
        p.relative_gap.push_back((xm - xt).norm() / denom);
    }
    return p;
}

double compounding_gap_at(const phys::PowerLawPair& pair, double x, int n) {
    const double t = phys::powerlaw_apply(pair, phys::PowerLawWhich::True, x, n);
    const double m = phys::powerlaw_apply(pair, phys::PowerLawWhich::Model, x, n);
    return std::abs(m - t) / t;
}

std::vector<std::pair<int, double>> compounding_gap(const phys::PowerLawPair& pair, int n_max) {
    if (n_max < 1) throw DomainError("compounding_gap: n_max must be >= 1");
    std::vector<std::pair<int, double>> table;
    table.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        table.emplace_back(n, compounding_gap_at(pair, 1.0, n));
    }
    return table;
}

model::Mlp corrupt_model(const model::Mlp& m, double level, std::uint64_t seed) {
    model::Mlp out = m;
    if (level == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& w : out.weights()) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                w(i, j) *= 1.0 + level * gauss(rng);
            }
        }
    }
    return out;
}

}  // namespace pat::diag
