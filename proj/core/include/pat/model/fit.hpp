#pragma once

#include "pat/model/mlp.hpp"
#include "pat/physics/system.hpp"

#include <functional>
#include <optional>

namespace pat::model {

// Sampler over valid (x, theta) pairs; defaults to the system's own
// sample_valid_input.
using InputSampler = std::function<std::pair<RealVector, RealVector>(std::mt19937_64&)>;

struct FitConfig {
    int n_samples = 2000;
    double val_fraction = 0.2;
    std::vector<int> hidden_dims = {256, 128, 64};
    ad::Activation activation = ad::Activation::Swish;
    double learning_rate = 1e-3;
    // Halve the fit learning rate every N epochs (0 disables).
    int lr_halve_every = 0;
    int batch_size = 64;
    int epochs = 400;
    // Early stop once validation MSE has not improved by min_delta for
    // `patience` consecutive epochs; the best-validation weights are kept.
    int patience = 40;
    double min_delta = 1e-9;
    // Simple L2 weight decay on the fit (0 disables). Smoother weights give
    // smoother Jacobians, which is what the backward pass consumes.
    double weight_decay = 0.0;
    // Maximum acceptable validation MSE. When set, the fit throws
    // FitQualityError (carrying the achieved value) if it misses, and
    // n_samples must be at least 10x the system output dim.
    std::optional<double> quality_gate;
    std::uint64_t seed = 1;
    InputSampler sampler;  // optional override
};

// Trains an MLP on (concat(x, theta) -> y) pairs recorded from the system.
// Deterministic given the seed. The returned model's report carries final
// train/validation MSE (per-sample squared error averaged over samples and
// output coordinates).
Mlp fit_mean_model(const phys::PhysicalSystem& system, const FitConfig& cfg);

// The underlying trainer: explicit (input, target) column pairs, shuffled
// train/validation split, Adam with early stopping on the validation plateau.
// cfg.n_samples and cfg.sampler are ignored here.
Mlp fit_regression(const RealMatrix& inputs, const RealMatrix& targets, const FitConfig& cfg);

// Sampler that feeds each sample's output back as the next sample's input
// (with a fresh uniform draw at probability fresh_prob): matches data
// collection by repeated application of the map in a feedforward stack, so
// the fit concentrates where downstream stages actually operate. With
// rescale_in_chain the fed-back signal passes a random affine then clamp01,
// covering the renormalize-rescale-clamp loop between stages. Requires
// matching input/output dims.
InputSampler make_chained_sampler(const phys::PhysicalSystem& system, double fresh_prob = 0.35,
                                  bool rescale_in_chain = false);

// Wraps a sampler so that each base draw is followed by `burst` jittered
// copies (coordinate noise of the given sigma). Recording close input pairs
// puts local finite differences into the data, which pins down the fitted
// map's Jacobians — still pure input/output sampling.
InputSampler make_paired_sampler(InputSampler base, int burst = 1, double sigma = 0.05);

// Mean squared error of the model on explicit pairs (columns are samples).
double evaluate_mse(const Mlp& model, const RealMatrix& inputs, const RealMatrix& targets);

}  // namespace pat::model
