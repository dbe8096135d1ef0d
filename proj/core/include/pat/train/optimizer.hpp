#pragma once

#include "pat/autodiff/stack.hpp"

#include <vector>

namespace pat::train {

enum class OptimizerKind { Sgd, Adam, Adadelta };

// Optional step-size schedule: halve the rate at exact multiples of the period.
struct LrSchedule {
    int halve_every = 0;  // 0 disables
};

// Per-parameter state mirrors the registry layout of the model it was bound
// to. Adam: beta1 = 0.9, beta2 = 0.999, eps = 1e-8. Adadelta: rho = 0.9,
// eps = 1e-6.
class Optimizer {
public:
    Optimizer(OptimizerKind kind, double learning_rate, LrSchedule schedule = {});

    void bind(const std::vector<ad::Layer*>& registry);
    bool bound() const { return !slots_.empty() || registry_.empty(); }

    // One update from an already-averaged gradient.
    void step(const ad::GradientSet& grads);

    // Applies the schedule for a completed epoch count.
    void set_epoch(int epoch);

    OptimizerKind kind() const { return kind_; }
    double current_lr() const { return lr_; }
    double base_lr() const { return base_lr_; }

private:
    struct Slot {
        RealVector acc1;  // Adam m / Adadelta E[g^2]
        RealVector acc2;  // Adam v / Adadelta E[dx^2]
    };

    OptimizerKind kind_;
    double base_lr_;
    double lr_;
    LrSchedule schedule_;
    long t_ = 0;
    std::vector<ad::Layer*> registry_;
    std::vector<Slot> slots_;
};

}  // namespace pat::train
