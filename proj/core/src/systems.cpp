#include "pat/physics/systems.hpp"

#include "pat/autodiff/ops.hpp"

#include <cmath>

namespace pat::phys {

// ---- PhysicalSystem base ------------------------------------------------------

void PhysicalSystem::check_eval_args(const RealVector& x, const RealVector& theta) const {
    require_dim(x, input_dim(), "physical system input");
    require_dim(theta, param_dim(), "physical system params");
}

std::pair<RealVector, RealVector> PhysicalSystem::sample_valid_input(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RealVector x(input_dim()), th(param_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
    for (Eigen::Index i = 0; i < th.size(); ++i) th[i] = u(rng);
    return {x, th};
}

// ---- ShgSurrogate ---------------------------------------------------------------

ShgSurrogate::ShgSurrogate(int n, double a, double c, bool trainable_scale)
    : n_(n), a_(a), c_(c), trainable_scale_(trainable_scale) {
    if (n < 2 || n % 2 != 0) throw DimensionError("ShgSurrogate: n must be even and >= 2");
}

namespace {

struct ShgPieces {
    RealVector ctrl, q, s, cropped;
    Eigen::Index crop_start;
    double a, c;
};

ShgPieces shg_pieces(int n, const RealVector& x, const RealVector& theta_n, double a, double c) {
    ShgPieces p;
    p.ctrl = ad::concat(x, theta_n);
    p.q = ad::clamp01(p.ctrl);
    p.s = ad::autocorrelate(p.q);
    p.crop_start = n / 2;  // central n entries of the 2n-length autocorrelation
    p.cropped = ad::crop(p.s, p.crop_start, n);
    p.a = a;
    p.c = c;
    return p;
}

}  // namespace

RealVector ShgSurrogate::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    const double a = trainable_scale_ ? theta[n_] : a_;
    const double c = trainable_scale_ ? theta[n_ + 1] : c_;
    const ShgPieces p = shg_pieces(n_, x, theta.head(n_), a, c);
    return ad::max_normalize(p.cropped, a, c, "shg_surrogate");
}

PhysicalSystem::Pullback ShgSurrogate::vjp(const RealVector& x, const RealVector& theta,
                                           const RealVector& cotangent) const {
    check_eval_args(x, theta);
    require_dim(cotangent, n_, "shg_surrogate cotangent");
    const double a = trainable_scale_ ? theta[n_] : a_;
    const double c = trainable_scale_ ? theta[n_ + 1] : c_;
    const ShgPieces p = shg_pieces(n_, x, theta.head(n_), a, c);

    const RealVector g_cropped = ad::vjp_max_normalize_input(p.cropped, a, cotangent);
    const RealVector g_s = ad::vjp_crop(p.s.size(), p.crop_start, g_cropped);
    const RealVector g_q = ad::vjp_autocorrelate(p.q, g_s);
    const RealVector g_ctrl = ad::vjp_clamp01(p.ctrl, g_q);

    Pullback out;
    out.g_x = g_ctrl.head(n_);
    if (trainable_scale_) {
        out.g_theta.resize(n_ + 2);
        out.g_theta.head(n_) = g_ctrl.tail(n_);
        out.g_theta[n_] = ad::vjp_max_normalize_scale(p.cropped, cotangent);
        out.g_theta[n_ + 1] = ad::vjp_max_normalize_offset(cotangent);
    } else {
        out.g_theta = g_ctrl.tail(n_);
    }
    return out;
}

std::pair<RealVector, RealVector> ShgSurrogate::sample_valid_input(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    RealVector x(n_), th(param_dim());
    for (Eigen::Index i = 0; i < n_; ++i) x[i] = u01(rng);
    for (Eigen::Index i = 0; i < n_; ++i) th[i] = u01(rng);
    if (trainable_scale_) {
        std::uniform_real_distribution<double> ua(0.5, 1.5);
        std::uniform_real_distribution<double> uc(-0.3, 0.3);
        th[n_] = ua(rng);
        th[n_ + 1] = uc(rng);
    }
    return {x, th};
}

RealVector ShgSurrogate::initial_params(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.3, 0.7);
    RealVector th(param_dim());
    for (Eigen::Index i = 0; i < n_; ++i) th[i] = u(rng);
    if (trainable_scale_) {
        th[n_] = a_;
        th[n_ + 1] = c_;
    }
    return th;
}

RealVector shg_forward(const ShgSurrogate& sys, const RealVector& x, const RealVector& theta) {
    require_dim(x, sys.n(), "shg_forward input");
    require_dim(theta, sys.n(), "shg_forward params");
    const ShgPieces p = shg_pieces(sys.n(), x, theta, sys.a(), sys.c());
    return ad::max_normalize(p.cropped, sys.a(), sys.c(), "shg_forward");
}

// ---- AutocorrSystem ----------------------------------------------------------------

AutocorrSystem::AutocorrSystem(int in_dim, int par_dim, int out_dim)
    : in_(in_dim), par_(par_dim), out_(out_dim) {
    const int m = in_ + par_;
    if (out_ < 1 || out_ > m) throw DimensionError("AutocorrSystem: output dim outside control length");
    crop_start_ = (m - out_) / 2;
}

RealVector AutocorrSystem::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    const RealVector q = ad::clamp01(ad::concat(x, theta));
    return ad::crop(ad::autocorrelate(q), crop_start_, out_);
}

PhysicalSystem::Pullback AutocorrSystem::vjp(const RealVector& x, const RealVector& theta,
                                             const RealVector& cotangent) const {
    check_eval_args(x, theta);
    const RealVector ctrl = ad::concat(x, theta);
    const RealVector q = ad::clamp01(ctrl);
    const RealVector g_s = ad::vjp_crop(q.size(), crop_start_, cotangent);
    const RealVector g_q = ad::vjp_autocorrelate(q, g_s);
    const RealVector g_ctrl = ad::vjp_clamp01(ctrl, g_q);
    return {g_ctrl.head(in_), g_ctrl.tail(par_)};
}

// ---- PlateConvolution ----------------------------------------------------------------

PlateConvolution::PlateConvolution(RealVector kernel) : kernel_(std::move(kernel)) {
    if (kernel_.size() < 1) throw DimensionError("PlateConvolution: empty kernel");
}

RealVector PlateConvolution::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    const Eigen::Index d = kernel_.size();
    RealVector y = RealVector::Zero(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j <= k; ++j) acc += kernel_[k - j] * x[j];
        y[k] = acc;
    }
    return y;
}

PhysicalSystem::Pullback PlateConvolution::vjp(const RealVector& x, const RealVector& theta,
                                               const RealVector& cotangent) const {
    check_eval_args(x, theta);
    const Eigen::Index d = kernel_.size();
    RealVector g = RealVector::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double acc = 0.0;
        for (Eigen::Index k = j; k < d; ++k) acc += kernel_[k - j] * cotangent[k];
        g[j] = acc;
    }
    return {g, RealVector()};
}

PlateConvolution PlateConvolution::damped_cosine(int d, double decay_time, double omega) {
    RealVector k(d);
    for (int j = 0; j < d; ++j) {
        k[j] = std::exp(-j / decay_time) * std::cos(omega * j);
    }
    return PlateConvolution(std::move(k));
}

PlateConvolution PlateConvolution::identity(int d) {
    RealVector k = RealVector::Zero(d);
    k[0] = 1.0;
    return PlateConvolution(std::move(k));
}

RealVector plate_forward(const PlateConvolution& sys, const RealVector& x) {
    return sys.eval(x, RealVector());
}

// ---- PowerLawPair -------------------------------------------------------------------

double powerlaw_apply(const PowerLawPair& pair, PowerLawWhich which, double x, int n_compositions) {
    if (!(x > 0.0)) throw DomainError("powerlaw_apply: x must be positive");
    if (n_compositions < 1) throw DomainError("powerlaw_apply: need at least one composition");
    const double coeff = (which == PowerLawWhich::True) ? pair.true_coeff : pair.model_coeff;
    double v = x;
    for (int i = 0; i < n_compositions; ++i) {
        v = coeff * std::pow(v, pair.exponent);
    }
    return v;
}

// ---- NoiseWrapper -------------------------------------------------------------------

NoiseWrapper::NoiseWrapper(const PhysicalSystem& inner, RealMatrix fixed_mixing, std::uint64_t seed)
    : inner_(&inner), fixed_mixing_(std::move(fixed_mixing)), seed_(seed), rng_(seed) {
    if (fixed_mixing_.size() > 0 && fixed_mixing_.rows() != inner.output_dim()) {
        throw DimensionError("NoiseWrapper: mixing matrix rows must equal inner output dim");
    }
}

NoiseWrapper::NoiseWrapper(const PhysicalSystem& inner,
                           std::function<RealMatrix(const RealVector&, const RealVector&)> mixing_of_input,
                           Eigen::Index n_lambda, std::uint64_t seed)
    : inner_(&inner),
      mixing_fn_(std::move(mixing_of_input)),
      n_lambda_(n_lambda),
      seed_(seed),
      rng_(seed) {}

RealMatrix NoiseWrapper::mixing_for(const RealVector& x, const RealVector& theta) const {
    if (mixing_fn_) return mixing_fn_(x, theta);
    return fixed_mixing_;
}

RealVector NoiseWrapper::eval(const RealVector& x, const RealVector& theta) const {
    RealVector y = inner_->eval(x, theta);
    const RealMatrix a = mixing_for(x, theta);
    if (a.size() == 0) return y;
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealVector z(a.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = gauss(rng_);
    return y + a * z;
}

PhysicalSystem::Pullback NoiseWrapper::vjp(const RealVector& x, const RealVector& theta,
                                           const RealVector& cotangent) const {
    return inner_->vjp(x, theta, cotangent);
}

std::pair<RealVector, RealVector> NoiseWrapper::sample_valid_input(std::mt19937_64& rng) const {
    return inner_->sample_valid_input(rng);
}

void NoiseWrapper::reset_stream() { rng_.seed(seed_); }

// ---- plumbing systems -----------------------------------------------------------------

RealVector IdentitySystem::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    return x;
}

PhysicalSystem::Pullback IdentitySystem::vjp(const RealVector& x, const RealVector& theta,
                                             const RealVector& cotangent) const {
    check_eval_args(x, theta);
    return {cotangent, RealVector()};
}

LinearSystem::LinearSystem(RealMatrix w, RealVector b) : w_(std::move(w)), b_(std::move(b)) {
    if (b_.size() == 0) b_ = RealVector::Zero(w_.rows());
    require_dim(b_, w_.rows(), "LinearSystem bias");
}

RealVector LinearSystem::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    return w_ * x + b_;
}

PhysicalSystem::Pullback LinearSystem::vjp(const RealVector& x, const RealVector& theta,
                                           const RealVector& cotangent) const {
    check_eval_args(x, theta);
    return {w_.transpose() * cotangent, RealVector()};
}

RealVector AdditiveSystem::eval(const RealVector& x, const RealVector& theta) const {
    check_eval_args(x, theta);
    return x + theta;
}

PhysicalSystem::Pullback AdditiveSystem::vjp(const RealVector& x, const RealVector& theta,
                                             const RealVector& cotangent) const {
    check_eval_args(x, theta);
    return {cotangent, cotangent};
}

}  // namespace pat::phys
