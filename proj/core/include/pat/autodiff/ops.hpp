#pragma once

// Differentiable primitives with hand-derived reverse-mode rules. Every map
// used by the surrogates, the digital models and the network layers is
// composed from these, so each forward has a matching vjp_* whose cost stays
// within a small constant factor of one forward evaluation.

#include "pat/types.hpp"

#include <string>
#include <utility>

namespace pat::ad {

// ---- elementwise activations ----------------------------------------------

enum class Activation { Identity, Swish };

// Throws UnsupportedOpError for names outside the supported set.
Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

RealVector apply_activation(Activation a, const RealVector& x);
// Cotangent of y = act(x): returns v .* act'(x).
RealVector vjp_activation(Activation a, const RealVector& x, const RealVector& v);

RealMatrix apply_activation(Activation a, const RealMatrix& x);
RealMatrix vjp_activation(Activation a, const RealMatrix& x, const RealMatrix& v);

// ---- affine -----------------------------------------------------------------

inline RealVector affine(const RealMatrix& w, const RealVector& b, const RealVector& x) {
    return w * x + b;
}
// y = Wx + b: g_x = W^T v.
inline RealVector vjp_affine_input(const RealMatrix& w, const RealVector& v) {
    return w.transpose() * v;
}

// ---- clamp ------------------------------------------------------------------

// max(0, min(x, 1)). Subgradient 0 at the kinks (x == 0, x == 1 exactly).
RealVector clamp01(const RealVector& x);
RealVector vjp_clamp01(const RealVector& x, const RealVector& v);

// ---- structural ops ----------------------------------------------------------

RealVector concat(const RealVector& a, const RealVector& b);
std::pair<RealVector, RealVector> split(const RealVector& v, Eigen::Index n_first);

RealVector crop(const RealVector& x, Eigen::Index start, Eigen::Index len);
// Scatters the cotangent back into a zero vector of the original length.
RealVector vjp_crop(Eigen::Index full_len, Eigen::Index start, const RealVector& v);

// Elementwise repeat: [x1, x1, ..., x2, x2, ...] with k copies of each entry.
RealVector repeat_each(const RealVector& x, int k);
RealVector vjp_repeat_each(int k, const RealVector& v);

// Sums (or averages) consecutive blocks of k entries.
RealVector bin_sum(const RealVector& x, int k, bool average = false);
RealVector vjp_bin_sum(Eigen::Index in_len, int k, bool average, const RealVector& v);

// ---- max-normalization --------------------------------------------------------

// Lowest index among maximal entries; ties broken deterministically.
Eigen::Index argmax_lowest(const RealVector& x);

// y = a * x / max(x) + c. Throws DegenerateMaxError when max(x) <= 0.
RealVector max_normalize(const RealVector& x, double a, double c, const char* who = "max_normalize");
// Gradient w.r.t. x; the argmax coordinate carries the quotient-rule term.
RealVector vjp_max_normalize_input(const RealVector& x, double a, const RealVector& v);
double vjp_max_normalize_scale(const RealVector& x, const RealVector& v);   // dL/da
inline double vjp_max_normalize_offset(const RealVector& v) { return v.sum(); }  // dL/dc

// ---- softmax -------------------------------------------------------------------

RealVector softmax(const RealVector& x);
RealVector vjp_softmax(const RealVector& x, const RealVector& v);

// ---- autocorrelation -------------------------------------------------------------

// s_j = sum_{i=0}^{min(j, m-j-1)} q_{j-i} q_{j+i}, output length m = len(q).
RealVector autocorrelate(const RealVector& q);
RealVector vjp_autocorrelate(const RealVector& q, const RealVector& v);

}  // namespace pat::ad
