#include "pat/nn/loss.hpp"

#include "pat/autodiff/ops.hpp"

#include <cmath>

namespace pat::nn {

LossTarget LossTarget::cls(int class_index) {
    LossTarget t;
    t.class_index = class_index;
    t.is_class = true;
    return t;
}

LossTarget LossTarget::vec(RealVector target) {
    LossTarget t;
    t.target = std::move(target);
    return t;
}

double cross_entropy_from_logits(const RealVector& logits, int target_class) {
    if (target_class < 0 || target_class >= logits.size()) {
        throw DomainError("cross_entropy: class index " + std::to_string(target_class) +
                          " outside [0, " + std::to_string(logits.size()) + ")");
    }
    const double m = logits.maxCoeff();
    const double lse = m + std::log((logits.array() - m).exp().sum());
    return lse - logits[target_class];
}

namespace {

double penalty_of(const ConstraintTerm& t, const RealVector& z) {
    if (z.size() == 0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        acc += std::max(0.0, z[i] - t.v_max) - std::min(0.0, z[i] - t.v_min);
    }
    if (t.averaged) acc /= static_cast<double>(z.size());
    return t.lambda * acc;
}

}  // namespace

RealVector constraint_gradient(const ConstraintTerm& t, const RealVector& z) {
    RealVector g = RealVector::Zero(z.size());
    const double scale = t.lambda * (t.averaged && z.size() > 0 ? 1.0 / z.size() : 1.0);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] > t.v_max) {
            g[i] = scale;
        } else if (z[i] < t.v_min) {
            g[i] = -scale;
        }
    }
    return g;
}

double constraint_penalty(const ConstraintTerm& term, const std::vector<BoundedControl>& controls) {
    double acc = 0.0;
    for (const auto& c : controls) {
        acc += penalty_of(term, term.target == ConstraintTerm::Target::Inputs ? c.input
                                                                              : c.ctrl_params);
    }
    return acc;
}

LossResult loss_and_error_vector(const LossSpec& spec, const RealVector& output,
                                 const LossTarget& target,
                                 const std::vector<BoundedControl>& controls) {
    LossResult r;
    if (spec.primary == PrimaryLoss::CrossEntropy) {
        if (!target.is_class) throw UsageError("cross-entropy loss needs a class-index target");
        r.primary = cross_entropy_from_logits(output, target.class_index);
        r.g_output = ad::softmax(output);
        r.g_output[target.class_index] -= 1.0;
    } else {
        require_dim(target.target, output.size(), "mse target");
        const RealVector d = output - target.target;
        r.primary = d.squaredNorm();
        r.g_output = 2.0 * d;
    }
    r.value = r.primary;
    for (const auto& term : spec.constraints) {
        r.value += constraint_penalty(term, controls);
    }
    return r;
}

}  // namespace pat::nn
