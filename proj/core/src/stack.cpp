#include "pat/autodiff/stack.hpp"

#include <cmath>

namespace pat::ad {

GradientSet GradientSet::zeros_like(const std::vector<Layer*>& registry) {
    GradientSet g;
    g.per_layer.reserve(registry.size());
    for (const Layer* l : registry) {
        g.per_layer.emplace_back(RealVector::Zero(l->param_count()));
    }
    return g;
}

void GradientSet::accumulate(int registry_index, const RealVector& g) {
    if (g.size() == 0) return;
    if (registry_index < 0 || registry_index >= static_cast<int>(per_layer.size())) {
        throw UsageError("GradientSet: layer not registered (model not finalized?)");
    }
    RealVector& slot = per_layer[registry_index];
    if (slot.size() != g.size()) {
        throw DimensionError("GradientSet: gradient length mismatch for layer slot");
    }
    slot += g;
}

void GradientSet::add_scaled(const GradientSet& other, double scale) {
    if (other.per_layer.size() != per_layer.size()) {
        throw DimensionError("GradientSet: layer count mismatch");
    }
    for (std::size_t i = 0; i < per_layer.size(); ++i) {
        per_layer[i] += scale * other.per_layer[i];
    }
}

void GradientSet::scale(double s) {
    for (auto& g : per_layer) g *= s;
}

RealVector GradientSet::flatten() const {
    Eigen::Index total = 0;
    for (const auto& g : per_layer) total += g.size();
    RealVector out(total);
    Eigen::Index at = 0;
    for (const auto& g : per_layer) {
        out.segment(at, g.size()) = g;
        at += g.size();
    }
    return out;
}

double GradientSet::norm() const {
    double sq = 0.0;
    for (const auto& g : per_layer) sq += g.squaredNorm();
    return std::sqrt(sq);
}

RealVector forward_stack(const LayerStack& layers, const RealVector& x,
                         std::vector<TapeNode>& tapes, const ExecContext& ctx) {
    tapes.clear();
    tapes.resize(layers.size());
    RealVector cur = x;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        cur = layers[i]->forward(cur, tapes[i], ctx);
    }
    return cur;
}

RealVector backprop_stack(const LayerStack& layers, const std::vector<TapeNode>& tapes,
                          const RealVector& g_final, GradientSet& grads, const ExecContext& ctx,
                          const InjectHook& hook) {
    if (tapes.size() != layers.size()) {
        throw UsageError("backprop_stack: tape/layer count mismatch (" + std::to_string(tapes.size()) +
                         " tapes, " + std::to_string(layers.size()) + " layers)");
    }
    RealVector g = g_final;
    for (std::size_t i = layers.size(); i-- > 0;) {
        g = layers[i]->vjp(tapes[i], g, grads, ctx);
        if (hook) hook(i, tapes[i], g, grads);
    }
    return g;
}

}  // namespace pat::ad
