#pragma once

#include "pat/types.hpp"

#include <random>
#include <string>
#include <utility>

namespace pat::phys {

// A pure input-output transformation (x, theta) -> y with dimensional
// metadata. Instances stand in for lab hardware: exact surrogates act as the
// true transformation f_p, fitted models as the differentiable stand-in f_m.
// Both sides expose an exact reverse-mode pullback so either can serve as the
// backward function of a split node.
class PhysicalSystem {
public:
    virtual ~PhysicalSystem() = default;

    virtual std::string name() const = 0;
    virtual Eigen::Index input_dim() const = 0;
    virtual Eigen::Index param_dim() const = 0;
    virtual Eigen::Index output_dim() const = 0;

    virtual RealVector eval(const RealVector& x, const RealVector& theta) const = 0;

    struct Pullback {
        RealVector g_x;
        RealVector g_theta;
    };

    // Exact VJP of this map at (x, theta) with output cotangent v.
    virtual Pullback vjp(const RealVector& x, const RealVector& theta,
                         const RealVector& cotangent) const = 0;

    // Draws (x, theta) from the system's valid input range; used when
    // generating fitting data. Default: uniform [0,1] on every coordinate.
    virtual std::pair<RealVector, RealVector> sample_valid_input(std::mt19937_64& rng) const;

protected:
    void check_eval_args(const RealVector& x, const RealVector& theta) const;
};

}  // namespace pat::phys
