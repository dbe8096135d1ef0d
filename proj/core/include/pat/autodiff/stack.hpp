#pragma once

// Reverse-mode differentiation over an ordered stack of layers. The graph
// shape is deliberately a sequential stack plus explicit combinators
// (residual blocks, parallel ensembles) rather than a general DAG.

#include "pat/autodiff/split.hpp"
#include "pat/types.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace pat::ad {

// Which function a split layer uses on each side of the pass. Pure digital
// layers ignore this.
struct ExecContext {
    enum class Fn { True, Model };
    Fn forward_fn = Fn::True;
    Fn backward_fn = Fn::True;
};

class Layer;

// One parameter-gradient vector per layer, ordered by registry index.
// Paramless layers hold empty entries so indices always line up.
struct GradientSet {
    std::vector<RealVector> per_layer;

    static GradientSet zeros_like(const std::vector<Layer*>& registry);
    void accumulate(int registry_index, const RealVector& g);
    void add_scaled(const GradientSet& other, double scale);
    void scale(double s);
    RealVector flatten() const;
    double norm() const;
};

// One trainable stage. Parameters live on the layer; forward passes are
// read-only apart from the tape, which is per-pass state owned by the caller.
class Layer {
public:
    virtual ~Layer() = default;

    virtual const char* kind() const = 0;
    virtual Eigen::Index input_dim() const = 0;
    virtual Eigen::Index output_dim() const = 0;

    RealVector& params() { return params_; }
    const RealVector& params() const { return params_; }
    Eigen::Index param_count() const { return params_.size(); }

    virtual RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const = 0;

    // Consumes the output cotangent, writes this layer's parameter gradient
    // into `grads`, and returns the cotangent at the layer input.
    virtual RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                           const ExecContext& ctx) const = 0;

    // Depth-first enumeration; combinators append their children too.
    virtual void collect(std::vector<Layer*>& out) { out.push_back(this); }

    int registry_index = -1;

protected:
    RealVector params_;
};

using LayerStack = std::vector<std::unique_ptr<Layer>>;

// Runs every layer in order, recording one TapeNode per layer.
RealVector forward_stack(const LayerStack& layers, const RealVector& x,
                         std::vector<TapeNode>& tapes, const ExecContext& ctx);

// Called after each top-level layer's vjp with the cotangent now sitting at
// that layer's input; used to inject direct (non-output-path) loss terms such
// as control-bound penalties.
using InjectHook =
    std::function<void(std::size_t layer_index, const TapeNode& tape, RealVector& g_input,
                       GradientSet& grads)>;

// Applies the chain rule layer by layer from last to first. Returns the
// cotangent at the stack input; parameter gradients accumulate into `grads`.
RealVector backprop_stack(const LayerStack& layers, const std::vector<TapeNode>& tapes,
                          const RealVector& g_final, GradientSet& grads, const ExecContext& ctx,
                          const InjectHook& hook = nullptr);

}  // namespace pat::ad
