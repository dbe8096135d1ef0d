#pragma once

// Input-dependent noise modelling: estimate an output covariance from
// repeated measurements, compress it through its spectral decomposition into
// a mixing matrix A (A A^T ~= cov), and fit a predictor mapping the physical
// input to the flattened A.

#include "pat/model/fit.hpp"
#include "pat/model/mlp.hpp"

#include <vector>

namespace pat::model {

struct CovarianceEstimate {
    RealVector mean;
    RealMatrix cov;  // unbiased, 1/(N-1)
    int n_samples = 0;
};

// Sample mean and unbiased covariance; needs >= 2 equal-length samples.
CovarianceEstimate estimate_covariance(const std::vector<RealVector>& samples);

// Columns are the top-n_lambda eigenvectors scaled by sqrt(eigenvalue),
// eigenvalues sorted descending. Eigenvalues in [-1e-10, 0] are clipped to 0;
// anything more negative is rejected as non-PSD. Each column's sign is fixed
// so its largest-magnitude entry is positive.
RealMatrix build_mixing_matrix(const CovarianceEstimate& est, int n_lambda);

struct NoiseModel {
    int n_lambda = 0;
    Eigen::Index out_dim = 0;
    int n_repeat = 0;
    Mlp predictor;  // input -> flattened A (row-major, out_dim x n_lambda)
    // Mean Frobenius error of the predicted covariance against the sampled
    // covariance on the held-out probes, relative to the sampled covariance
    // norm (floored at 1% of the mean squared output magnitude, so noiseless
    // systems report ~0).
    double val_reconstruction_error = 0.0;

    RealMatrix predict_mixing(const RealVector& x, const RealVector& theta) const;
};

struct NoiseFitConfig {
    double val_fraction = 0.2;
    std::vector<int> hidden_dims = {64, 64};
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 600;
    int patience = 60;
    std::uint64_t seed = 1;
};

// Samples the (noisy) system n_repeat times per probe, builds per-probe
// mixing-matrix targets, and fits the predictor on the training probes.
NoiseModel fit_noise_model(const phys::PhysicalSystem& system,
                           const std::vector<std::pair<RealVector, RealVector>>& probe_inputs,
                           int n_repeat, int n_lambda, const NoiseFitConfig& cfg = {});

}  // namespace pat::model
