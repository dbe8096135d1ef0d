#pragma once

// Instrumentation of the simulation-reality gap: gradient angle and magnitude
// comparisons across the three algorithms, per-layer forward-gap profiles,
// and the scalar compounding demonstration. All analyses are read-only and
// only meaningful in simulated settings where the true gradient is available.

#include "pat/model/mlp.hpp"
#include "pat/physics/systems.hpp"
#include "pat/train/trainer.hpp"

#include <optional>
#include <vector>

namespace pat::diag {

// Angle in degrees between two gradient sets (flattened over every trainable
// vector). Empty optional when either vector is zero: the angle is undefined
// there, never reported as 0.
std::optional<double> gradient_angle(const ad::GradientSet& g1, const ad::GradientSet& g2);

struct AlgorithmComparison {
    double angle_pat_ideal_deg = 0.0;
    double angle_insilico_ideal_deg = 0.0;
    double magnitude_ratio_pat = 0.0;       // |g_pat| / |g_ideal|
    double magnitude_ratio_insilico = 0.0;  // |g_insilico| / |g_ideal|
    // per trainable layer (registry order, paramless layers skipped)
    std::vector<double> per_layer_angle_pat;
    std::vector<double> per_layer_angle_insilico;
};

// Computes the three gradient sets with identical parameters on the identical
// batch and returns pairwise comparisons against the ideal gradient.
AlgorithmComparison compare_algorithms_at_point(const nn::PnnModel& model,
                                                const train::Dataset& data,
                                                const std::vector<std::size_t>& batch);

// Relative L2 gap of the signal entering each physical stage when the forward
// pass runs on the model instead of the true system. The first entry compares
// the raw input and is always 0.
struct LayerGapProfile {
    std::vector<double> relative_gap;
};
LayerGapProfile layer_gap_profile(const nn::PnnModel& model, const RealVector& x);

// Relative compounding gap of the power-law toy pair at x = 1 for n = 1..n_max.
std::vector<std::pair<int, double>> compounding_gap(const phys::PowerLawPair& pair, int n_max);
double compounding_gap_at(const phys::PowerLawPair& pair, double x, int n);

// A copy of the model with every weight entry scaled by (1 + level * xi),
// xi iid standard normal; level 0 returns the model unchanged.
model::Mlp corrupt_model(const model::Mlp& m, double level, std::uint64_t seed);

}  // namespace pat::diag
