#pragma once

// Concrete layer kinds composing the network architectures: digital pre/post
// processing primitives and the split physical layer.

#include "pat/autodiff/stack.hpp"
#include "pat/physics/system.hpp"

namespace pat::nn {

using ad::ExecContext;
using ad::GradientSet;
using ad::Layer;
using ad::LayerStack;
using ad::TapeNode;

// Elementwise repeat: 12 -> 24 as [x1, x1, x2, x2, ...].
class RepeatLayer final : public Layer {
public:
    RepeatLayer(Eigen::Index in_dim, int k);
    const char* kind() const override { return "Repeat"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index output_dim() const override { return in_ * k_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index in_;
    int k_;
};

// y = a x + b with scalar trainables [a, b], initialized to [1, 0].
class ScalarRescaleLayer final : public Layer {
public:
    explicit ScalarRescaleLayer(Eigen::Index dim);
    const char* kind() const override { return "ScalarRescale"; }
    Eigen::Index input_dim() const override { return dim_; }
    Eigen::Index output_dim() const override { return dim_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index dim_;
};

// y_i = a_i x_i + b_i with params [a(d); b(d)], initialized to a=1, b=0.
class ElementwiseRescaleLayer final : public Layer {
public:
    explicit ElementwiseRescaleLayer(Eigen::Index dim);
    const char* kind() const override { return "ElementwiseRescale"; }
    Eigen::Index input_dim() const override { return dim_; }
    Eigen::Index output_dim() const override { return dim_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index dim_;
};

// y = [x; theta], theta this layer's trainable vector.
class ConcatParamsLayer final : public Layer {
public:
    ConcatParamsLayer(Eigen::Index in_dim, RealVector init_params);
    const char* kind() const override { return "ConcatParams"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index output_dim() const override { return in_ + params_.size(); }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index in_;
};

// The split node inside a network: the true system runs the forward pass or
// the backward Jacobian depending on the execution context, the attached
// model covers the other side. Trainable params are whatever the system
// declares; the leading `bounded_params` entries are the physical control
// section monitored by bound constraints.
class PhysicalLayer final : public Layer {
public:
    PhysicalLayer(const phys::PhysicalSystem& true_system, RealVector init_params,
                  Eigen::Index bounded_params = -1);

    const char* kind() const override { return "Physical"; }
    Eigen::Index input_dim() const override { return true_system_->input_dim(); }
    Eigen::Index output_dim() const override { return true_system_->output_dim(); }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

    void set_model(const phys::PhysicalSystem* model);
    const phys::PhysicalSystem* model() const { return model_system_; }
    const phys::PhysicalSystem& true_system() const { return *true_system_; }
    Eigen::Index bounded_param_count() const { return bounded_; }

private:
    const phys::PhysicalSystem& select(ExecContext::Fn which, const char* side) const;

    const phys::PhysicalSystem* true_system_;
    const phys::PhysicalSystem* model_system_ = nullptr;
    Eigen::Index bounded_;
};

// y = a x / max(x) + b with trainables [a, b]; raises DegenerateMaxError when
// max(x) <= 0.
class RenormRescaleLayer final : public Layer {
public:
    explicit RenormRescaleLayer(Eigen::Index dim);
    const char* kind() const override { return "RenormRescale"; }
    Eigen::Index input_dim() const override { return dim_; }
    Eigen::Index output_dim() const override { return dim_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index dim_;
};

class CropLayer final : public Layer {
public:
    CropLayer(Eigen::Index in_dim, Eigen::Index start, Eigen::Index len);
    const char* kind() const override { return "Crop"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index output_dim() const override { return len_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index in_, start_, len_;
};

// Sums (or averages) consecutive blocks of k entries.
class BinSumLayer final : public Layer {
public:
    BinSumLayer(Eigen::Index in_dim, int k, bool average = false);
    const char* kind() const override { return "BinSum"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index output_dim() const override { return in_ / k_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index in_;
    int k_;
    bool average_;
};

// Softmax with trainable temperature: y = softmax(x / T), params [T].
class SoftmaxTLayer final : public Layer {
public:
    explicit SoftmaxTLayer(Eigen::Index dim, double init_temperature = 1.0);
    const char* kind() const override { return "SoftmaxT"; }
    Eigen::Index input_dim() const override { return dim_; }
    Eigen::Index output_dim() const override { return dim_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;

private:
    Eigen::Index dim_;
};

// Residual combinator: y = inner(x) + a x, trainable skip weight [a].
class SkipAddLayer final : public Layer {
public:
    SkipAddLayer(LayerStack inner, double init_skip_weight = 1.0);
    const char* kind() const override { return "SkipAdd"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index output_dim() const override { return in_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;
    void collect(std::vector<Layer*>& out) override;

private:
    LayerStack inner_;
    Eigen::Index in_;
};

// Parallel branches merged by a trainable weighted sum:
// y = sum_i w_i branch_i(x) + b, params [w_1..w_K, b].
class EnsembleSumLayer final : public Layer {
public:
    explicit EnsembleSumLayer(std::vector<LayerStack> branches);
    const char* kind() const override { return "EnsembleSum"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index output_dim() const override { return out_; }
    RealVector forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const override;
    RealVector vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                   const ExecContext& ctx) const override;
    void collect(std::vector<Layer*>& out) override;

private:
    std::vector<LayerStack> branches_;
    Eigen::Index in_, out_;
};

}  // namespace pat::nn
