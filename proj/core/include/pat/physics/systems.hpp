#pragma once

// Simulated physical systems standing in for lab hardware: the autocorrelation
// surrogate for broadband second-harmonic generation, the oscillating-plate
// linear convolution, the power-law toy pair, and a correlated-noise wrapper.

#include "pat/physics/system.hpp"

#include <functional>
#include <memory>
#include <random>

namespace pat::phys {

// ---------------------------------------------------------------------------
// SHG surrogate: q = clamp01([x, theta]); s = autocorrelate(q);
// y = a * crop(s) / max(crop(s)) + c, crop = central n entries of the
// 2n-length autocorrelation.
//
// a and c are trainable. When trainable_scale is set (the default), the
// system's parameter vector is [theta_1..theta_n, a, c] (param_dim = n + 2)
// so a training loop and a fitted digital model see the full trainable
// dependence; the struct's a and c then act as initial values. With
// trainable_scale off, param_dim = n and the stored a, c are used as-is.
// ---------------------------------------------------------------------------
class ShgSurrogate final : public PhysicalSystem {
public:
    explicit ShgSurrogate(int n, double a = 1.0, double c = 0.0, bool trainable_scale = true);

    std::string name() const override { return "shg_surrogate"; }
    Eigen::Index input_dim() const override { return n_; }
    Eigen::Index param_dim() const override { return trainable_scale_ ? n_ + 2 : n_; }
    Eigen::Index output_dim() const override { return n_; }

    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

    // a,c sampled around their defaults so a fitted model covers the region
    // training explores; x and the control part of theta are uniform [0,1].
    std::pair<RealVector, RealVector> sample_valid_input(std::mt19937_64& rng) const override;

    int n() const { return n_; }
    double a() const { return a_; }
    double c() const { return c_; }
    bool trainable_scale() const { return trainable_scale_; }

    // Initial parameter vector for a network layer backed by this system:
    // theta ~ Uniform[0.3, 0.7] (keeps the clamp in its linear region),
    // followed by [a, c] when the scale is trainable.
    RealVector initial_params(std::mt19937_64& rng) const;

private:
    int n_;
    double a_, c_;
    bool trainable_scale_;
};

// The documented n-parameter surface: evaluates with the surrogate's own a, c.
RealVector shg_forward(const ShgSurrogate& sys, const RealVector& x, const RealVector& theta);

// ---------------------------------------------------------------------------
// Clamped-autocorrelation stage without normalization: q = clamp01([x, theta]),
// s = autocorrelate(q), output = central out_dim entries of s. The renormalize
// and rescale step lives in a separate digital layer. Used for the five-layer
// vowel network, where the 100-d control is split 48/52 (or 50/50) between
// signal and parameters.
// ---------------------------------------------------------------------------
class AutocorrSystem final : public PhysicalSystem {
public:
    AutocorrSystem(int in_dim, int par_dim, int out_dim);

    std::string name() const override { return "autocorr_system"; }
    Eigen::Index input_dim() const override { return in_; }
    Eigen::Index param_dim() const override { return par_; }
    Eigen::Index output_dim() const override { return out_; }

    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

private:
    int in_, par_, out_;
    Eigen::Index crop_start_;
};

// ---------------------------------------------------------------------------
// Oscillating plate: lower-triangular Toeplitz convolution
// y_k = sum_{j<=k} c_{k-j+1} x_j (one-based). No trainable parameters; the
// kernel is a property of the medium.
// ---------------------------------------------------------------------------
class PlateConvolution final : public PhysicalSystem {
public:
    explicit PlateConvolution(RealVector kernel);

    std::string name() const override { return "plate_convolution"; }
    Eigen::Index input_dim() const override { return kernel_.size(); }
    Eigen::Index param_dim() const override { return 0; }
    Eigen::Index output_dim() const override { return kernel_.size(); }

    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

    const RealVector& kernel() const { return kernel_; }

    // Damped-cosine impulse response, the shape of a decaying plate mode.
    static PlateConvolution damped_cosine(int d, double decay_time, double omega);
    // Kernel [1, 0, 0, ...]: the identity map.
    static PlateConvolution identity(int d);

private:
    RealVector kernel_;
};

RealVector plate_forward(const PlateConvolution& sys, const RealVector& x);

// ---------------------------------------------------------------------------
// The scalar compounding toy pair: true map 2.0 x^1.1 against the
// almost-identical model 2.01 x^1.1.
// ---------------------------------------------------------------------------
struct PowerLawPair {
    double true_coeff = 2.0;
    double model_coeff = 2.01;
    double exponent = 1.1;
};

enum class PowerLawWhich { True, Model };

// n-fold composition of the selected map; x must be positive.
double powerlaw_apply(const PowerLawPair& pair, PowerLawWhich which, double x, int n_compositions);

// ---------------------------------------------------------------------------
// Additive correlated noise on top of an inner system:
// y = inner(x, theta) + A z, z iid standard normal from a seeded stream.
// A is either a fixed matrix or a function of the input. The pullback
// delegates to the inner system (the noise carries no trainable signal).
// ---------------------------------------------------------------------------
class NoiseWrapper final : public PhysicalSystem {
public:
    NoiseWrapper(const PhysicalSystem& inner, RealMatrix fixed_mixing, std::uint64_t seed);
    NoiseWrapper(const PhysicalSystem& inner,
                 std::function<RealMatrix(const RealVector& x, const RealVector& theta)> mixing_of_input,
                 Eigen::Index n_lambda, std::uint64_t seed);

    std::string name() const override { return "noisy(" + inner_->name() + ")"; }
    Eigen::Index input_dim() const override { return inner_->input_dim(); }
    Eigen::Index param_dim() const override { return inner_->param_dim(); }
    Eigen::Index output_dim() const override { return inner_->output_dim(); }

    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

    std::pair<RealVector, RealVector> sample_valid_input(std::mt19937_64& rng) const override;

    // Restart the noise stream; identical call sequences then replay exactly.
    void reset_stream();

private:
    RealMatrix mixing_for(const RealVector& x, const RealVector& theta) const;

    const PhysicalSystem* inner_;
    RealMatrix fixed_mixing_;
    std::function<RealMatrix(const RealVector&, const RealVector&)> mixing_fn_;
    Eigen::Index n_lambda_ = 0;
    std::uint64_t seed_;
    mutable std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Plumbing systems used as stubs and fitting targets.
// ---------------------------------------------------------------------------

class IdentitySystem final : public PhysicalSystem {
public:
    explicit IdentitySystem(int d) : d_(d) {}
    std::string name() const override { return "identity_system"; }
    Eigen::Index input_dim() const override { return d_; }
    Eigen::Index param_dim() const override { return 0; }
    Eigen::Index output_dim() const override { return d_; }
    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

private:
    int d_;
};

// Fixed y = W x (+ b), no trainable parameters.
class LinearSystem final : public PhysicalSystem {
public:
    explicit LinearSystem(RealMatrix w, RealVector b = RealVector());
    std::string name() const override { return "linear_system"; }
    Eigen::Index input_dim() const override { return w_.cols(); }
    Eigen::Index param_dim() const override { return 0; }
    Eigen::Index output_dim() const override { return w_.rows(); }
    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

private:
    RealMatrix w_;
    RealVector b_;
};

// y = x + theta, the simplest split-node exercise.
class AdditiveSystem final : public PhysicalSystem {
public:
    explicit AdditiveSystem(int d) : d_(d) {}
    std::string name() const override { return "additive_system"; }
    Eigen::Index input_dim() const override { return d_; }
    Eigen::Index param_dim() const override { return d_; }
    Eigen::Index output_dim() const override { return d_; }
    RealVector eval(const RealVector& x, const RealVector& theta) const override;
    Pullback vjp(const RealVector& x, const RealVector& theta,
                 const RealVector& cotangent) const override;

private:
    int d_;
};

}  // namespace pat::phys
