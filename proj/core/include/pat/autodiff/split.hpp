#pragma once

// The split autodiff node: an input-output stage whose forward evaluation and
// backward Jacobian may come from two different functions. The backward
// Jacobians are always evaluated at the forward-time saved inputs.

#include "pat/physics/system.hpp"
#include "pat/types.hpp"

#include <vector>

namespace pat::ad {

// Per-layer forward record. Jacobians in the backward pass are evaluated at
// exactly these saved vectors, never at recomputed or predicted ones.
struct TapeNode {
    int layer_id = -1;
    RealVector input;
    RealVector params;
    RealVector output;
    bool valid = false;
    // Sub-stack records for combinator layers (residual blocks, ensembles).
    std::vector<std::vector<TapeNode>> children;
};

struct SplitFunction {
    const phys::PhysicalSystem* forward_fn = nullptr;
    const phys::PhysicalSystem* backward_fn = nullptr;

    SplitFunction() = default;
    // Validates that both functions agree on all three dimensions.
    SplitFunction(const phys::PhysicalSystem& fwd, const phys::PhysicalSystem& bwd);

    Eigen::Index input_dim() const { return forward_fn->input_dim(); }
    Eigen::Index param_dim() const { return forward_fn->param_dim(); }
    Eigen::Index output_dim() const { return forward_fn->output_dim(); }
};

struct SplitResult {
    RealVector output;
    TapeNode tape;
};

// y = forward_fn(x, theta); the tape stores (x, theta, y) verbatim.
SplitResult forward_split(const SplitFunction& node, const RealVector& x,
                          const RealVector& theta, int layer_id = -1);

// g_x = (d backward_fn/dx)^T g_y, g_theta = (d backward_fn/dtheta)^T g_y,
// both Jacobians evaluated at the tape's saved input and parameters.
phys::PhysicalSystem::Pullback backward_split(const SplitFunction& node, const TapeNode& tape,
                                              const RealVector& g_y);

// Reverse-mode pullback of a differentiable map at (x, theta); thin alias for
// the map's own exact VJP.
inline phys::PhysicalSystem::Pullback vjp(const phys::PhysicalSystem& f, const RealVector& x,
                                          const RealVector& theta, const RealVector& cotangent) {
    return f.vjp(x, theta, cotangent);
}

}  // namespace pat::ad
