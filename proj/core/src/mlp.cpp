#include "pat/model/mlp.hpp"

#include <cmath>
#include <random>

namespace pat::model {

Mlp::Mlp(std::vector<int> layer_dims, ad::Activation hidden_activation, std::uint64_t init_seed)
    : dims_(std::move(layer_dims)), act_(hidden_activation) {
    if (dims_.size() < 2) throw DimensionError("Mlp: need at least input and output dims");
    for (int d : dims_) {
        if (d < 1) throw DimensionError("Mlp: non-positive layer dim");
    }
    std::mt19937_64 rng(init_seed);
    weights_.reserve(dims_.size() - 1);
    biases_.reserve(dims_.size() - 1);
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const int fan_in = dims_[l], fan_out = dims_[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> u(-limit, limit);
        RealMatrix w(fan_out, fan_in);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = u(rng);
        }
        weights_.push_back(std::move(w));
        biases_.push_back(RealVector::Zero(fan_out));
    }
}

RealVector Mlp::forward(const RealVector& input) const {
    require_dim(input, input_dim(), "mlp input");
    RealVector h = input;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        h = weights_[l] * h + biases_[l];
        if (l + 1 < weights_.size()) h = ad::apply_activation(act_, h);
    }
    return h;
}

RealMatrix Mlp::forward_batch(const RealMatrix& inputs) const {
    RealMatrix h = inputs;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        h = (weights_[l] * h).colwise() + biases_[l];
        if (l + 1 < weights_.size()) h = ad::apply_activation(act_, h);
    }
    return h;
}

RealMatrix Mlp::forward_batch(const RealMatrix& inputs, Cache& cache) const {
    cache.pre.assign(weights_.size(), RealMatrix());
    cache.post.assign(weights_.size(), RealMatrix());
    RealMatrix h = inputs;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        cache.pre[l] = (weights_[l] * h).colwise() + biases_[l];
        h = (l + 1 < weights_.size()) ? ad::apply_activation(act_, cache.pre[l]) : cache.pre[l];
        cache.post[l] = h;
    }
    return h;
}

void Mlp::backward_batch(const RealMatrix& inputs, const Cache& cache, const RealMatrix& g_out,
                         std::vector<RealMatrix>& g_w, std::vector<RealVector>& g_b) const {
    const std::size_t n = weights_.size();
    g_w.assign(n, RealMatrix());
    g_b.assign(n, RealVector());
    RealMatrix g = g_out;  // cotangent at the current layer's pre-activation
    for (std::size_t l = n; l-- > 0;) {
        const RealMatrix& layer_in = (l == 0) ? inputs : cache.post[l - 1];
        g_w[l] = g * layer_in.transpose();
        g_b[l] = g.rowwise().sum();
        if (l > 0) {
            g = weights_[l].transpose() * g;
            g = ad::vjp_activation(act_, cache.pre[l - 1], g);
        }
    }
}

RealVector Mlp::vjp_input(const RealVector& input, const RealVector& cotangent) const {
    require_dim(input, input_dim(), "mlp vjp input");
    require_dim(cotangent, output_dim(), "mlp vjp cotangent");
    // forward, keeping pre-activations
    std::vector<RealVector> pre(weights_.size());
    RealVector h = input;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        pre[l] = weights_[l] * h + biases_[l];
        h = (l + 1 < weights_.size()) ? ad::apply_activation(act_, pre[l]) : pre[l];
    }
    RealVector g = cotangent;
    for (std::size_t l = weights_.size(); l-- > 0;) {
        g = weights_[l].transpose() * g;
        if (l > 0) g = ad::vjp_activation(act_, pre[l - 1], g);
    }
    return g;
}

phys::PhysicalSystem::Pullback mlp_vjp(const Mlp& model, const RealVector& x,
                                       const RealVector& theta, const RealVector& g_y) {
    if (x.size() + theta.size() != model.input_dim()) {
        throw DimensionError("mlp_vjp: concat(x, theta) does not match model input dim");
    }
    const RealVector g = model.vjp_input(ad::concat(x, theta), g_y);
    return {g.head(x.size()), g.tail(theta.size())};
}

MlpSystem::MlpSystem(const Mlp& mlp, Eigen::Index n_input, Eigen::Index n_params,
                     bool clamp_control)
    : mlp_(&mlp), nx_(n_input), nth_(n_params), clamp_control_(clamp_control) {
    if (nx_ + nth_ != mlp.input_dim()) {
        throw DimensionError("MlpSystem: declared split does not match model input dim");
    }
}

RealVector MlpSystem::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    const RealVector ctrl = ad::concat(x, theta);
    return mlp_->forward(clamp_control_ ? ad::clamp01(ctrl) : ctrl);
}

phys::PhysicalSystem::Pullback MlpSystem::vjp(const RealVector& x, const RealVector& theta,
                                              const RealVector& cotangent) const {
    check_eval_args(x, theta);
    const RealVector ctrl = ad::concat(x, theta);
    RealVector g = clamp_control_ ? mlp_->vjp_input(ad::clamp01(ctrl), cotangent)
                                  : mlp_->vjp_input(ctrl, cotangent);
    if (clamp_control_) g = ad::vjp_clamp01(ctrl, g);
    return {g.head(nx_), g.tail(nth_)};
}

RescaledMlpSystem::RescaledMlpSystem(const Mlp& mlp, Eigen::Index n_input, Eigen::Index n_ctrl)
    : mlp_(&mlp), nx_(n_input), nctrl_(n_ctrl) {
    if (nx_ + nctrl_ != mlp.input_dim()) {
        throw DimensionError("RescaledMlpSystem: declared split does not match model input dim");
    }
}

RealVector RescaledMlpSystem::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    const double a = theta[nctrl_], c = theta[nctrl_ + 1];
    const RealVector q = ad::clamp01(ad::concat(x, theta.head(nctrl_)));
    return a * mlp_->forward(q) + RealVector::Constant(mlp_->output_dim(), c);
}

phys::PhysicalSystem::Pullback RescaledMlpSystem::vjp(const RealVector& x, const RealVector& theta,
                                                      const RealVector& cotangent) const {
    check_eval_args(x, theta);
    const double a = theta[nctrl_];
    const RealVector ctrl = ad::concat(x, theta.head(nctrl_));
    const RealVector q = ad::clamp01(ctrl);
    const RealVector u = mlp_->forward(q);
    const RealVector g_q = mlp_->vjp_input(q, a * cotangent);
    const RealVector g_ctrl = ad::vjp_clamp01(ctrl, g_q);
    Pullback out;
    out.g_x = g_ctrl.head(nx_);
    out.g_theta.resize(nctrl_ + 2);
    out.g_theta.head(nctrl_) = g_ctrl.tail(nctrl_);
    out.g_theta[nctrl_] = cotangent.dot(u);
    out.g_theta[nctrl_ + 1] = cotangent.sum();
    return out;
}

}  // namespace pat::model
