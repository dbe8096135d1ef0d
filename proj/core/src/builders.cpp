#include "pat/nn/builders.hpp"

#include <random>

namespace pat::nn {

namespace {

RealVector uniform_params(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    RealVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

RealVector physical_init(const phys::PhysicalSystem& system, std::mt19937_64& rng) {
    if (const auto* shg = dynamic_cast<const phys::ShgSurrogate*>(&system)) {
        return shg->initial_params(rng);
    }
    return uniform_params(system.param_dim(), 0.3, 0.7, rng);
}

}  // namespace

PnnModel build_vowel_numerical(int n_layers, const phys::PhysicalSystem& system,
                               std::uint64_t init_seed) {
    if (n_layers < 1) throw ConfigError("build_vowel_numerical: n_layers must be >= 1");
    if (system.input_dim() != 24 || system.output_dim() != 24) {
        throw DimensionError("build_vowel_numerical: needs a 24-in/24-out physical system");
    }
    std::mt19937_64 rng(init_seed);

    PnnModel m;
    m.layers.push_back(std::make_unique<RepeatLayer>(12, 2));
    Eigen::Index bounded = system.param_dim();
    if (const auto* shg = dynamic_cast<const phys::ShgSurrogate*>(&system)) {
        if (shg->trainable_scale()) bounded = shg->n();  // a, c are not part of the control
    }
    for (int l = 0; l < n_layers; ++l) {
        m.constraint_sources.push_back(m.layers.size());
        m.layers.push_back(
            std::make_unique<PhysicalLayer>(system, physical_init(system, rng), bounded));
    }
    // o_i = y_{2i+3} + y_{2i+4}: one-based entries 5..18, summed in pairs.
    m.layers.push_back(std::make_unique<CropLayer>(24, 4, 14));
    m.layers.push_back(std::make_unique<BinSumLayer>(14, 2));

    m.loss.primary = PrimaryLoss::CrossEntropy;
    m.loss.constraints.push_back({ConstraintTerm::Target::Inputs, 0.02, 0.0, 1.0, false});
    m.loss.constraints.push_back({ConstraintTerm::Target::Params, 0.02, 0.0, 1.0, false});

    m.finalize();
    return m;
}

PnnModel build_shg_vowel(int n_layers, const phys::AutocorrSystem& system,
                         std::uint64_t init_seed) {
    if (n_layers < 1) throw ConfigError("build_shg_vowel: n_layers must be >= 1");
    if (system.input_dim() != 100 || system.param_dim() != 0 || system.output_dim() != 50) {
        throw DimensionError("build_shg_vowel: needs a 100-control/50-out autocorrelation stage");
    }
    std::mt19937_64 rng(init_seed);

    PnnModel m;
    m.layers.push_back(std::make_unique<ScalarRescaleLayer>(12));
    m.layers.push_back(std::make_unique<RepeatLayer>(12, 4));
    for (int l = 0; l < n_layers; ++l) {
        const Eigen::Index n_theta = (l == 0) ? 52 : 50;
        m.constraint_sources.push_back(m.layers.size());
        m.layers.push_back(std::make_unique<ConcatParamsLayer>(
            100 - n_theta, uniform_params(n_theta, 0.3, 0.7, rng)));
        m.layers.push_back(std::make_unique<PhysicalLayer>(system, RealVector(), 0));
        m.layers.push_back(std::make_unique<RenormRescaleLayer>(50));
    }
    // crop one-based 12..32 (21 entries), then sum 3-entry sections -> 7.
    m.layers.push_back(std::make_unique<CropLayer>(50, 11, 21));
    m.layers.push_back(std::make_unique<BinSumLayer>(21, 3));

    m.loss.primary = PrimaryLoss::CrossEntropy;
    m.loss.constraints.push_back({ConstraintTerm::Target::Params, 0.5, 0.0, 1.0, true});
    m.loss.constraints.push_back({ConstraintTerm::Target::Inputs, 2.0, 0.0, 1.0, true});

    m.finalize();
    return m;
}

PnnModel build_plate_classifier(const phys::PlateConvolution& plate) {
    const Eigen::Index d = plate.input_dim();
    if (d < 61) throw DimensionError("build_plate_classifier: plate dim too small for the readout");

    PnnModel m;
    for (int l = 0; l < 3; ++l) {
        m.layers.push_back(std::make_unique<ElementwiseRescaleLayer>(d));
        m.layers.push_back(std::make_unique<PhysicalLayer>(plate, RealVector(), 0));
    }
    // readout window: 50 entries starting at d-60 one-based, averaged in fives.
    m.layers.push_back(std::make_unique<CropLayer>(d, d - 61, 50));
    m.layers.push_back(std::make_unique<BinSumLayer>(50, 5, /*average=*/true));

    m.loss.primary = PrimaryLoss::CrossEntropy;
    m.finalize();
    return m;
}

}  // namespace pat::nn
