#include "pat/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>

namespace pat::ad {

// ---- activations ------------------------------------------------------------

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "swish") return Activation::Swish;
    throw UnsupportedOpError("unsupported activation: " + name);
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Swish: return "swish";
    }
    throw UnsupportedOpError("unsupported activation enum value");
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double swish(double x) { return x * sigmoid(x); }

// d/dx [x*sigma(x)] = sigma(x) * (1 + x*(1 - sigma(x)))
inline double swish_prime(double x) {
    const double s = sigmoid(x);
    return s * (1.0 + x * (1.0 - s));
}

}  // namespace

RealVector apply_activation(Activation a, const RealVector& x) {
    if (a == Activation::Identity) return x;
    return x.unaryExpr([](double v) { return swish(v); });
}

RealVector vjp_activation(Activation a, const RealVector& x, const RealVector& v) {
    if (a == Activation::Identity) return v;
    return v.cwiseProduct(x.unaryExpr([](double u) { return swish_prime(u); }));
}

RealMatrix apply_activation(Activation a, const RealMatrix& x) {
    if (a == Activation::Identity) return x;
    return x.unaryExpr([](double v) { return swish(v); });
}

RealMatrix vjp_activation(Activation a, const RealMatrix& x, const RealMatrix& v) {
    if (a == Activation::Identity) return v;
    return v.cwiseProduct(x.unaryExpr([](double u) { return swish_prime(u); }));
}

// ---- clamp --------------------------------------------------------------------

RealVector clamp01(const RealVector& x) {
    return x.unaryExpr([](double v) { return std::max(0.0, std::min(v, 1.0)); });
}

RealVector vjp_clamp01(const RealVector& x, const RealVector& v) {
    RealVector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        g[i] = (x[i] > 0.0 && x[i] < 1.0) ? v[i] : 0.0;
    }
    return g;
}

// ---- structural ----------------------------------------------------------------

RealVector concat(const RealVector& a, const RealVector& b) {
    RealVector out(a.size() + b.size());
    out << a, b;
    return out;
}

std::pair<RealVector, RealVector> split(const RealVector& v, Eigen::Index n_first) {
    if (n_first < 0 || n_first > v.size()) throw DimensionError("split: bad split point");
    return {v.head(n_first), v.tail(v.size() - n_first)};
}

RealVector crop(const RealVector& x, Eigen::Index start, Eigen::Index len) {
    if (start < 0 || len < 0 || start + len > x.size()) {
        throw DimensionError("crop: window [" + std::to_string(start) + ", " +
                             std::to_string(start + len) + ") outside vector of length " +
                             std::to_string(x.size()));
    }
    return x.segment(start, len);
}

RealVector vjp_crop(Eigen::Index full_len, Eigen::Index start, const RealVector& v) {
    RealVector g = RealVector::Zero(full_len);
    g.segment(start, v.size()) = v;
    return g;
}

RealVector repeat_each(const RealVector& x, int k) {
    if (k < 1) throw DimensionError("repeat_each: k must be >= 1");
    RealVector out(x.size() * k);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.segment(i * k, k).setConstant(x[i]);
    }
    return out;
}

RealVector vjp_repeat_each(int k, const RealVector& v) {
    if (v.size() % k != 0) throw DimensionError("vjp_repeat_each: length not divisible by k");
    RealVector g(v.size() / k);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        g[i] = v.segment(i * k, k).sum();
    }
    return g;
}

RealVector bin_sum(const RealVector& x, int k, bool average) {
    if (k < 1 || x.size() % k != 0) {
        throw DimensionError("bin_sum: length " + std::to_string(x.size()) +
                             " not divisible by bin size " + std::to_string(k));
    }
    RealVector out(x.size() / k);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = x.segment(i * k, k).sum();
    }
    if (average) out /= static_cast<double>(k);
    return out;
}

RealVector vjp_bin_sum(Eigen::Index in_len, int k, bool average, const RealVector& v) {
    RealVector g(in_len);
    const double scale = average ? 1.0 / k : 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        g.segment(i * k, k).setConstant(v[i] * scale);
    }
    return g;
}

// ---- max-normalization -----------------------------------------------------------

Eigen::Index argmax_lowest(const RealVector& x) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
        if (x[i] > x[best]) best = i;
    }
    return best;
}

RealVector max_normalize(const RealVector& x, double a, double c, const char* who) {
    const double m = x[argmax_lowest(x)];
    if (!(m > 0.0)) {
        throw DegenerateMaxError(std::string(who) + ": degenerate max " + std::to_string(m) +
                                 " (all-zero or non-positive signal)");
    }
    return (a / m) * x + RealVector::Constant(x.size(), c);
}

RealVector vjp_max_normalize_input(const RealVector& x, double a, const RealVector& v) {
    const Eigen::Index k = argmax_lowest(x);
    const double m = x[k];
    if (!(m > 0.0)) throw DegenerateMaxError("vjp_max_normalize: degenerate max");
    RealVector g = (a / m) * v;
    // quotient rule on the argmax coordinate: d(x_i/m)/dm = -x_i/m^2
    g[k] -= (a / (m * m)) * v.dot(x);
    return g;
}

double vjp_max_normalize_scale(const RealVector& x, const RealVector& v) {
    const double m = x[argmax_lowest(x)];
    if (!(m > 0.0)) throw DegenerateMaxError("vjp_max_normalize: degenerate max");
    return v.dot(x) / m;
}

// ---- softmax ----------------------------------------------------------------------

RealVector softmax(const RealVector& x) {
    const double m = x.maxCoeff();
    RealVector e = (x.array() - m).exp();
    return e / e.sum();
}

RealVector vjp_softmax(const RealVector& x, const RealVector& v) {
    const RealVector p = softmax(x);
    const double dot = v.dot(p);
    return p.cwiseProduct(v - RealVector::Constant(v.size(), dot));
}

// ---- autocorrelation -----------------------------------------------------------------

RealVector autocorrelate(const RealVector& q) {
    const Eigen::Index m = q.size();
    if (m < 1) throw DimensionError("autocorrelate: empty input");
    RealVector s = RealVector::Zero(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index imax = std::min(j, m - j - 1);
        double acc = 0.0;
        for (Eigen::Index i = 0; i <= imax; ++i) {
            acc += q[j - i] * q[j + i];
        }
        s[j] = acc;
    }
    return s;
}

RealVector vjp_autocorrelate(const RealVector& q, const RealVector& v) {
    const Eigen::Index m = q.size();
    RealVector g = RealVector::Zero(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index imax = std::min(j, m - j - 1);
        for (Eigen::Index i = 0; i <= imax; ++i) {
            g[j - i] += v[j] * q[j + i];
            g[j + i] += v[j] * q[j - i];
        }
    }
    return g;
}

}  // namespace pat::ad
