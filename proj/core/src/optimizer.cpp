#include "pat/train/optimizer.hpp"

#include <cmath>

namespace pat::train {

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, LrSchedule schedule)
    : kind_(kind), base_lr_(learning_rate), lr_(learning_rate), schedule_(schedule) {
    if (!(learning_rate > 0.0)) throw ConfigError("Optimizer: learning rate must be positive");
    if (schedule.halve_every < 0) throw ConfigError("Optimizer: negative schedule period");
}

void Optimizer::bind(const std::vector<ad::Layer*>& registry) {
    registry_ = registry;
    slots_.clear();
    slots_.reserve(registry.size());
    for (const ad::Layer* l : registry) {
        Slot s;
        s.acc1 = RealVector::Zero(l->param_count());
        s.acc2 = RealVector::Zero(l->param_count());
        slots_.push_back(std::move(s));
    }
    t_ = 0;
}

void Optimizer::set_epoch(int epoch) {
    if (schedule_.halve_every > 0 && epoch >= 0) {
        lr_ = base_lr_ * std::pow(0.5, static_cast<double>(epoch / schedule_.halve_every));
    }
}

void Optimizer::step(const ad::GradientSet& grads) {
    if (slots_.size() != grads.per_layer.size() || registry_.empty() && !grads.per_layer.empty()) {
        throw UsageError("Optimizer: step before bind, or registry mismatch");
    }
    ++t_;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        RealVector& p = registry_[i]->params();
        const RealVector& g = grads.per_layer[i];
        if (p.size() == 0) continue;
        require_dim(g, p.size(), "optimizer gradient");
        Slot& s = slots_[i];
        switch (kind_) {
            case OptimizerKind::Sgd: {
                p -= lr_ * g;
                break;
            }
            case OptimizerKind::Adam: {
                constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
                const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
                const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
                s.acc1 = b1 * s.acc1 + (1.0 - b1) * g;
                s.acc2 = b2 * s.acc2 + (1.0 - b2) * g.cwiseProduct(g);
                p -= lr_ * (s.acc1 / c1)
                         .cwiseQuotient(((s.acc2 / c2).cwiseSqrt().array() + eps).matrix());
                break;
            }
            case OptimizerKind::Adadelta: {
                constexpr double rho = 0.9, eps = 1e-6;
                s.acc1 = rho * s.acc1 + (1.0 - rho) * g.cwiseProduct(g);
                const RealVector dx =
                    -((s.acc2.array() + eps).sqrt() / (s.acc1.array() + eps).sqrt()).matrix()
                         .cwiseProduct(g);
                s.acc2 = rho * s.acc2 + (1.0 - rho) * dx.cwiseProduct(dx);
                p += lr_ * dx;
                break;
            }
        }
    }
}

}  // namespace pat::train
