#include "pat/model/noise.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pat::model {

CovarianceEstimate estimate_covariance(const std::vector<RealVector>& samples) {
    if (samples.size() < 2) {
        throw InsufficientDataError("estimate_covariance: need at least 2 samples, got " +
                                    std::to_string(samples.size()));
    }
    const Eigen::Index d = samples.front().size();
    for (const auto& s : samples) require_dim(s, d, "covariance sample");

    const double n = static_cast<double>(samples.size());
    CovarianceEstimate est;
    est.n_samples = static_cast<int>(samples.size());
    est.mean = RealVector::Zero(d);
    for (const auto& s : samples) est.mean += s;
    est.mean /= n;

    est.cov = RealMatrix::Zero(d, d);
    for (const auto& s : samples) {
        const RealVector c = s - est.mean;
        est.cov.noalias() += c * c.transpose();
    }
    est.cov /= (n - 1.0);
    return est;
}

RealMatrix build_mixing_matrix(const CovarianceEstimate& est, int n_lambda) {
    const Eigen::Index d = est.cov.rows();
    if (est.cov.cols() != d) throw DimensionError("build_mixing_matrix: covariance not square");
    if ((est.cov - est.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, est.cov.cwiseAbs().maxCoeff())) {
        throw NumericError("build_mixing_matrix: covariance not symmetric");
    }
    if (n_lambda < 1 || n_lambda > d) {
        throw DimensionError("build_mixing_matrix: n_lambda outside [1, dim]");
    }

    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(est.cov);
    if (eig.info() != Eigen::Success) throw NumericError("build_mixing_matrix: eigensolve failed");
    if (eig.eigenvalues()[0] < -1e-10) {
        throw NumericError("build_mixing_matrix: covariance not PSD (eigenvalue " +
                           std::to_string(eig.eigenvalues()[0]) + ")");
    }
    // ascending from the solver; walk from the back for descending order
    RealMatrix a(d, n_lambda);
    for (int k = 0; k < n_lambda; ++k) {
        double lambda = std::max(eig.eigenvalues()[d - 1 - k], 0.0);
        RealVector col = std::sqrt(lambda) * eig.eigenvectors().col(d - 1 - k);
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        if (col[imax] < 0.0) col = -col;
        a.col(k) = col;
    }
    return a;
}

RealMatrix NoiseModel::predict_mixing(const RealVector& x, const RealVector& theta) const {
    const RealVector flat = predictor.forward(ad::concat(x, theta));
    RealMatrix a(out_dim, n_lambda);
    for (Eigen::Index i = 0; i < out_dim; ++i) {
        for (int k = 0; k < n_lambda; ++k) a(i, k) = flat[i * n_lambda + k];
    }
    return a;
}

NoiseModel fit_noise_model(const phys::PhysicalSystem& system,
                           const std::vector<std::pair<RealVector, RealVector>>& probe_inputs,
                           int n_repeat, int n_lambda, const NoiseFitConfig& cfg) {
    if (probe_inputs.size() < 5) {
        throw InsufficientDataError("fit_noise_model: need at least 5 probes");
    }
    if (n_repeat < 2) throw ConfigError("fit_noise_model: n_repeat must be >= 2");
    const Eigen::Index out_dim = system.output_dim();
    if (n_lambda < 1 || n_lambda > out_dim) {
        throw ConfigError("fit_noise_model: n_lambda outside [1, out_dim]");
    }

    const Eigen::Index in_dim = system.input_dim() + system.param_dim();
    const int n_probes = static_cast<int>(probe_inputs.size());

    // Per-probe mixing-matrix targets from repeated measurements.
    RealMatrix inputs(in_dim, n_probes);
    RealMatrix targets(out_dim * n_lambda, n_probes);
    std::vector<RealMatrix> sampled_cov(n_probes);
    std::vector<RealVector> reps(n_repeat);
    double out_scale_sq = 0.0;  // mean squared output magnitude across probes
    for (int q = 0; q < n_probes; ++q) {
        const auto& [x, th] = probe_inputs[q];
        for (int k = 0; k < n_repeat; ++k) reps[k] = system.eval(x, th);
        const CovarianceEstimate est = estimate_covariance(reps);
        sampled_cov[q] = est.cov;
        out_scale_sq += est.mean.squaredNorm();
        const RealMatrix a = build_mixing_matrix(est, n_lambda);
        inputs.col(q) = ad::concat(x, th);
        for (Eigen::Index i = 0; i < out_dim; ++i) {
            for (int k = 0; k < n_lambda; ++k) targets(i * n_lambda + k, q) = a(i, k);
        }
    }

    // Hold out validation probes, fit the predictor on the rest.
    std::mt19937_64 rng(cfg.seed);
    std::vector<int> order(n_probes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int n_val = std::max(1, static_cast<int>(n_probes * cfg.val_fraction));
    const int n_train = n_probes - n_val;
    if (n_train < 2) throw InsufficientDataError("fit_noise_model: empty training split");

    RealMatrix x_train(in_dim, n_train), y_train(out_dim * n_lambda, n_train);
    for (int k = 0; k < n_train; ++k) {
        x_train.col(k) = inputs.col(order[k]);
        y_train.col(k) = targets.col(order[k]);
    }

    FitConfig fit;
    fit.val_fraction = cfg.val_fraction;
    fit.hidden_dims = cfg.hidden_dims;
    fit.learning_rate = cfg.learning_rate;
    fit.batch_size = cfg.batch_size;
    fit.epochs = cfg.epochs;
    fit.patience = cfg.patience;
    fit.seed = cfg.seed;

    NoiseModel nm;
    nm.n_lambda = n_lambda;
    nm.out_dim = out_dim;
    nm.n_repeat = n_repeat;
    nm.predictor = fit_regression(x_train, y_train, fit);

    // Validation: Frobenius error of the reconstructed covariance on the
    // held-out probes, relative to the sampled covariance norm. The
    // denominator is floored at 1% of the mean squared output magnitude so a
    // noiseless system reports ~0 instead of 0/0.
    const double mean_out_sq = std::max(out_scale_sq / n_probes, 1e-12);
    double err = 0.0;
    for (int k = 0; k < n_val; ++k) {
        const int q = order[n_train + k];
        const RealVector flat = nm.predictor.forward(inputs.col(q));
        RealMatrix a(out_dim, n_lambda);
        for (Eigen::Index i = 0; i < out_dim; ++i) {
            for (int c = 0; c < n_lambda; ++c) a(i, c) = flat[i * n_lambda + c];
        }
        const double denom = std::max(sampled_cov[q].norm(), 1e-2 * mean_out_sq);
        err += (a * a.transpose() - sampled_cov[q]).norm() / denom;
    }
    nm.val_reconstruction_error = err / n_val;
    return nm;
}

}  // namespace pat::model
