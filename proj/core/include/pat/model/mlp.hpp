#pragma once

// Data-driven differentiable digital model: a dense MLP with swish hidden
// activations, an analytic reverse-mode pullback, and a text (JSON)
// serialization that round-trips bit-exactly at 17 significant digits.

#include "pat/autodiff/ops.hpp"
#include "pat/physics/system.hpp"
#include "pat/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pat::model {

struct FitReport {
    double train_mse = 0.0;
    double val_mse = 0.0;
    int n_samples = 0;
    int epochs_run = 0;
    std::uint64_t seed = 0;
};

class Mlp {
public:
    Mlp() = default;
    // layer_dims: input, hidden..., output. No hidden entries makes the model
    // affine. Weights Glorot-uniform from the seed, biases zero.
    Mlp(std::vector<int> layer_dims, ad::Activation hidden_activation, std::uint64_t init_seed);

    const std::vector<int>& layer_dims() const { return dims_; }
    ad::Activation activation() const { return act_; }
    Eigen::Index input_dim() const { return dims_.front(); }
    Eigen::Index output_dim() const { return dims_.back(); }
    int weight_layer_count() const { return static_cast<int>(weights_.size()); }

    std::vector<RealMatrix>& weights() { return weights_; }
    std::vector<RealVector>& biases() { return biases_; }
    const std::vector<RealMatrix>& weights() const { return weights_; }
    const std::vector<RealVector>& biases() const { return biases_; }

    RealVector forward(const RealVector& input) const;
    // Columns are samples.
    RealMatrix forward_batch(const RealMatrix& inputs) const;

    // Exact reverse-mode pullback w.r.t. the input.
    RealVector vjp_input(const RealVector& input, const RealVector& cotangent) const;

    // Fitting support: cached forward and the weight/bias gradient of a batch.
    struct Cache {
        std::vector<RealMatrix> pre;   // pre-activation per weight layer
        std::vector<RealMatrix> post;  // activations (input of next layer)
    };
    RealMatrix forward_batch(const RealMatrix& inputs, Cache& cache) const;
    void backward_batch(const RealMatrix& inputs, const Cache& cache, const RealMatrix& g_out,
                        std::vector<RealMatrix>& g_w, std::vector<RealVector>& g_b) const;

    FitReport report;

private:
    std::vector<int> dims_;
    ad::Activation act_ = ad::Activation::Swish;
    std::vector<RealMatrix> weights_;  // [out x in] per layer
    std::vector<RealVector> biases_;
};

// Gradient of a probe v^T mlp(concat(x, theta)) split back into the x- and
// theta-parts.
phys::PhysicalSystem::Pullback mlp_vjp(const Mlp& model, const RealVector& x,
                                       const RealVector& theta, const RealVector& g_y);

// Adapts a fitted MLP to the physical-system interface with a declared
// input/parameter split: eval(x, theta) = mlp(concat(x, theta)). With
// clamp_control set, the concatenated control passes through clamp01 before
// the MLP (exact saturation structure: the network is never queried outside
// its fitted box and saturated coordinates backpropagate exactly zero).
class MlpSystem final : public phys::PhysicalSystem {
public:
    MlpSystem(const Mlp& mlp, Eigen::Index n_input, Eigen::Index n_params,
              bool clamp_control = false);

    std::string name() const override { return "mlp_system"; }
    Eigen::Index input_dim() const override { return nx_; }
    Eigen::Index param_dim() const override { return nth_; }
    Eigen::Index output_dim() const override { return mlp_->output_dim(); }
    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

    const Mlp& mlp() const { return *mlp_; }

private:
    const Mlp* mlp_;
    Eigen::Index nx_, nth_;
    bool clamp_control_;
};

// Digital stand-in for a stage of the form y = a * u(clamp01([x, theta_ctrl]))
// + c: the fitted MLP covers the normalized physical map u on the clamped
// control box, while the clamp and the trailing [a, c] rescale apply as exact
// analytic structure. The model is never queried outside its fitted region,
// saturated control coordinates backpropagate exactly zero, and the rescale
// Jacobian stays valid wherever a and c wander.
class RescaledMlpSystem final : public phys::PhysicalSystem {
public:
    RescaledMlpSystem(const Mlp& mlp, Eigen::Index n_input, Eigen::Index n_ctrl);

    std::string name() const override { return "rescaled_mlp_system"; }
    Eigen::Index input_dim() const override { return nx_; }
    Eigen::Index param_dim() const override { return nctrl_ + 2; }
    Eigen::Index output_dim() const override { return mlp_->output_dim(); }
    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

private:
    const Mlp* mlp_;
    Eigen::Index nx_, nctrl_;
};

// ---- persistence ------------------------------------------------------------

std::string to_json(const Mlp& model);
Mlp mlp_from_json(const std::string& text);
void save_mlp(const Mlp& model, const std::string& path);
Mlp load_mlp(const std::string& path);

}  // namespace pat::model
