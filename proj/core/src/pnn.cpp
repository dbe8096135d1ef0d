#include "pat/nn/pnn.hpp"

namespace pat::nn {

void PnnModel::finalize() {
    registry_.clear();
    for (auto& l : layers) l->collect(registry_);
    for (std::size_t i = 0; i < registry_.size(); ++i) {
        registry_[i]->registry_index = static_cast<int>(i);
    }
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
        if (layers[i]->output_dim() != layers[i + 1]->input_dim()) {
            throw DimensionError("PnnModel: layer " + std::to_string(i) + " (" + layers[i]->kind() +
                                 ") outputs " + std::to_string(layers[i]->output_dim()) +
                                 " but layer " + std::to_string(i + 1) + " (" +
                                 layers[i + 1]->kind() + ") expects " +
                                 std::to_string(layers[i + 1]->input_dim()));
        }
    }
    for (std::size_t idx : constraint_sources) {
        if (idx >= layers.size()) throw UsageError("PnnModel: constraint source index out of range");
        (void)control_of(idx, ad::TapeNode{});  // validates the layer kind only
    }
}

Eigen::Index PnnModel::input_dim() const {
    if (layers.empty()) throw UsageError("PnnModel: empty model");
    return layers.front()->input_dim();
}

Eigen::Index PnnModel::output_dim() const {
    if (layers.empty()) throw UsageError("PnnModel: empty model");
    return layers.back()->output_dim();
}

Eigen::Index PnnModel::trainable_param_count() const {
    Eigen::Index n = 0;
    for (const Layer* l : registry_) n += l->param_count();
    return n;
}

void PnnModel::attach_model(const phys::PhysicalSystem* model) {
    for (PhysicalLayer* pl : physical_layers()) pl->set_model(model);
}

std::vector<PhysicalLayer*> PnnModel::physical_layers() {
    std::vector<PhysicalLayer*> out;
    for (Layer* l : registry_) {
        if (auto* pl = dynamic_cast<PhysicalLayer*>(l)) out.push_back(pl);
    }
    return out;
}

std::vector<const PhysicalLayer*> PnnModel::physical_layers() const {
    std::vector<const PhysicalLayer*> out;
    for (const Layer* l : registry_) {
        if (auto* pl = dynamic_cast<const PhysicalLayer*>(l)) out.push_back(pl);
    }
    return out;
}

BoundedControl PnnModel::control_of(std::size_t layer_index, const ad::TapeNode& tape) const {
    const Layer* l = layers[layer_index].get();
    BoundedControl c;
    c.layer_index = layer_index;
    if (const auto* pl = dynamic_cast<const PhysicalLayer*>(l)) {
        if (tape.valid) {
            c.input = tape.input;
            c.ctrl_params = tape.params.head(pl->bounded_param_count());
        }
        return c;
    }
    if (dynamic_cast<const ConcatParamsLayer*>(l) != nullptr) {
        if (tape.valid) {
            c.input = tape.input;
            c.ctrl_params = tape.params;
        }
        return c;
    }
    throw UsageError(std::string("PnnModel: constraint source must be a Physical or ConcatParams "
                                 "layer, got ") +
                     l->kind());
}

PnnModel::ForwardResult PnnModel::forward(const RealVector& x, const ExecContext& ctx) const {
    if (registry_.empty()) throw UsageError("PnnModel: forward before finalize()");
    ForwardResult r;
    r.output = ad::forward_stack(layers, x, r.tapes, ctx);
    r.controls.reserve(constraint_sources.size());
    for (std::size_t idx : constraint_sources) {
        r.controls.push_back(control_of(idx, r.tapes[idx]));
    }
    return r;
}

PnnModel::BackwardResult PnnModel::backward(const ForwardResult& fwd, const RealVector& g_output,
                                            const ExecContext& ctx) const {
    GradientSet grads = GradientSet::zeros_like(registry_);
    const bool has_constraints = !loss.constraints.empty() && !constraint_sources.empty();

    ad::InjectHook hook;
    if (has_constraints) {
        hook = [this](std::size_t layer_index, const ad::TapeNode& tape, RealVector& g_input,
                      GradientSet& g) {
            for (std::size_t s : constraint_sources) {
                if (s != layer_index) continue;
                const BoundedControl c = control_of(layer_index, tape);
                const Layer* l = layers[layer_index].get();
                for (const auto& term : loss.constraints) {
                    if (term.target == ConstraintTerm::Target::Inputs) {
                        g_input += constraint_gradient(term, c.input);
                    } else {
                        RealVector g_p = RealVector::Zero(l->param_count());
                        g_p.head(c.ctrl_params.size()) =
                            constraint_gradient(term, c.ctrl_params);
                        g.accumulate(l->registry_index, g_p);
                    }
                }
            }
        };
    }

    RealVector g_input = ad::backprop_stack(layers, fwd.tapes, g_output, grads, ctx, hook);
    return {std::move(grads), std::move(g_input)};
}

RealVector PnnModel::parameter_vector() const {
    Eigen::Index total = trainable_param_count();
    RealVector flat(total);
    Eigen::Index at = 0;
    for (const Layer* l : registry_) {
        flat.segment(at, l->param_count()) = l->params();
        at += l->param_count();
    }
    return flat;
}

void PnnModel::set_parameter_vector(const RealVector& flat) {
    require_dim(flat, trainable_param_count(), "PnnModel parameter vector");
    Eigen::Index at = 0;
    for (Layer* l : registry_) {
        l->params() = flat.segment(at, l->param_count());
        at += l->param_count();
    }
}

}  // namespace pat::nn
