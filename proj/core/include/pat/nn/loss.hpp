#pragma once

#include "pat/types.hpp"

#include <vector>

namespace pat::nn {

enum class PrimaryLoss { CrossEntropy, Mse };

// One bound penalty: lambda * sum_i [max(0, z_i - v_max) - min(0, z_i - v_min)]
// over the selected control stream, optionally averaged per element. The
// monitored values are the pre-clamp physical controls (a post-clamp value can
// never leave [0, 1], which would make the term vacuous).
struct ConstraintTerm {
    enum class Target { Inputs, Params };
    Target target = Target::Inputs;
    double lambda = 0.0;
    double v_min = 0.0;
    double v_max = 1.0;
    bool averaged = false;
};

struct LossSpec {
    PrimaryLoss primary = PrimaryLoss::CrossEntropy;
    std::vector<ConstraintTerm> constraints;
};

// Per physical stage: the signal entering the control and the bounded section
// of the stage's trainable parameters, both recorded pre-clamp.
struct BoundedControl {
    std::size_t layer_index = 0;
    RealVector input;
    RealVector ctrl_params;
};

struct LossTarget {
    static LossTarget cls(int class_index);
    static LossTarget vec(RealVector target);
    int class_index = -1;
    RealVector target;
    bool is_class = false;
};

struct LossResult {
    double value = 0.0;      // primary + constraint terms
    double primary = 0.0;    // primary term alone
    RealVector g_output;     // d(primary)/d(output); constraint gradients are
                             // injected at their layers during the backward pass
};

// Computes the loss and the error vector. For cross-entropy the softmax is
// folded analytically: g = softmax(o) - onehot(target).
LossResult loss_and_error_vector(const LossSpec& spec, const RealVector& output,
                                 const LossTarget& target,
                                 const std::vector<BoundedControl>& controls);

double constraint_penalty(const ConstraintTerm& term, const std::vector<BoundedControl>& controls);
// d(penalty)/dz for one monitored vector z of the given term.
RealVector constraint_gradient(const ConstraintTerm& term, const RealVector& z);

double cross_entropy_from_logits(const RealVector& logits, int target_class);

}  // namespace pat::nn
