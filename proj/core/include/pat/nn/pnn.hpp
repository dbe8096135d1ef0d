#pragma once

// The network container: an ordered layer stack, a loss specification, and
// the parameter registry mapping every trainable vector onto an optimizer
// slot. Forward passes record tapes plus the bounded physical controls the
// constraint terms monitor.

#include "pat/nn/layers.hpp"
#include "pat/nn/loss.hpp"

namespace pat::nn {

class PnnModel {
public:
    PnnModel() = default;
    PnnModel(PnnModel&&) = default;
    PnnModel& operator=(PnnModel&&) = default;

    LayerStack layers;
    LossSpec loss;
    // Indices of top-level layers whose controls the bound terms monitor.
    std::vector<std::size_t> constraint_sources;

    // Assigns registry indices depth-first and validates the dim chain.
    void finalize();
    bool finalized() const { return !registry_.empty() || layers.empty(); }

    const std::vector<Layer*>& registry() const { return registry_; }
    Eigen::Index input_dim() const;
    Eigen::Index output_dim() const;
    Eigen::Index trainable_param_count() const;

    // Installs the digital model on every physical layer (or clears it).
    void attach_model(const phys::PhysicalSystem* model);
    std::vector<PhysicalLayer*> physical_layers();
    std::vector<const PhysicalLayer*> physical_layers() const;

    struct ForwardResult {
        RealVector output;
        std::vector<ad::TapeNode> tapes;
        std::vector<BoundedControl> controls;
    };

    ForwardResult forward(const RealVector& x, const ExecContext& ctx) const;

    struct BackwardResult {
        GradientSet grads;
        RealVector g_input;
    };

    // Backpropagates g_output and the constraint terms; returns the gradient
    // of the total loss w.r.t. every trainable parameter vector and the input.
    BackwardResult backward(const ForwardResult& fwd, const RealVector& g_output,
                            const ExecContext& ctx) const;

    // Flattened parameter snapshot/restore in registry order.
    RealVector parameter_vector() const;
    void set_parameter_vector(const RealVector& flat);

private:
    BoundedControl control_of(std::size_t layer_index, const ad::TapeNode& tape) const;

    std::vector<Layer*> registry_;
};

}  // namespace pat::nn
