#include "pat/autodiff/split.hpp"

namespace pat::ad {

SplitFunction::SplitFunction(const phys::PhysicalSystem& fwd, const phys::PhysicalSystem& bwd)
    : forward_fn(&fwd), backward_fn(&bwd) {
    if (fwd.input_dim() != bwd.input_dim() || fwd.param_dim() != bwd.param_dim() ||
        fwd.output_dim() != bwd.output_dim()) {
        throw DimensionError("SplitFunction: forward and backward functions disagree on dims (" +
                             fwd.name() + " vs " + bwd.name() + ")");
    }
}

SplitResult forward_split(const SplitFunction& node, const RealVector& x, const RealVector& theta,
                          int layer_id) {
    if (node.forward_fn == nullptr) throw UsageError("forward_split: unassigned forward function");
    require_dim(x, node.input_dim(), "forward_split input");
    require_dim(theta, node.param_dim(), "forward_split params");

    SplitResult r;
    r.output = node.forward_fn->eval(x, theta);
    if (!r.output.allFinite()) {
        throw NumericError("forward_split: non-finite output from " + node.forward_fn->name());
    }
    r.tape.layer_id = layer_id;
    r.tape.input = x;
    r.tape.params = theta;
    r.tape.output = r.output;
    r.tape.valid = true;
    return r;
}

phys::PhysicalSystem::Pullback backward_split(const SplitFunction& node, const TapeNode& tape,
                                              const RealVector& g_y) {
    if (node.backward_fn == nullptr) throw UsageError("backward_split: unassigned backward function");
    if (!tape.valid) throw UsageError("backward_split: missing tape (no forward pass recorded)");
    require_dim(g_y, node.output_dim(), "backward_split cotangent");
    return node.backward_fn->vjp(tape.input, tape.params, g_y);
}

}  // namespace pat::ad
