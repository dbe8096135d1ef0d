#pragma once

// Named architecture presets. Index conventions in the descriptions are
// one-based inclusive (as in the architecture write-ups); the code converts
// to zero-based windows internally.

#include "pat/nn/pnn.hpp"
#include "pat/physics/systems.hpp"

#include <cstdint>

namespace pat::nn {

// 12-d input repeated twice -> n_layers x 24-dim physical stages -> outputs
// o_i = y_{2i+3} + y_{2i+4}, i = 1..7 (pairs (5,6)..(17,18), one-based).
// Loss: cross-entropy(softmax(o)) + bound penalty (lambda = 0.02, [0, 1],
// unaveraged) on each stage's pre-clamp control [x, theta].
// The physical stages accept any 24-in/24-out system (identity stubs in
// tests); for an ShgSurrogate the trainable vector is [theta(24), a, c].
PnnModel build_vowel_numerical(int n_layers, const phys::PhysicalSystem& system,
                               std::uint64_t init_seed);

// The five-layer architecture: overall rescale -> repeat x4 (12 -> 48) ->
// [concat trainable params -> 100-d control autocorrelation stage (50-d out)
// -> renormalize + rescale] x n_layers -> crop 12..32 (one-based, 21 entries)
// -> sum in bins of 3 -> 7 outputs. First stage concatenates 52 parameters,
// later stages 50. Loss: cross-entropy + per-element-averaged bound terms
// (lambda_theta = 0.5 on params, lambda_x = 2 on inputs, bounds [0, 1]).
PnnModel build_shg_vowel(int n_layers, const phys::AutocorrSystem& system,
                         std::uint64_t init_seed);

// [elementwise rescale -> plate convolution] x 3 -> crop 50 entries starting
// at d-60 (one-based) -> average in bins of 5 -> 10 outputs; cross-entropy.
PnnModel build_plate_classifier(const phys::PlateConvolution& plate);

}  // namespace pat::nn
