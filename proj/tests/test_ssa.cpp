#include "pat/ssa/ssa.hpp"

#include <doctest.h>

#include <cmath>

using namespace pat;

TEST_SUITE_BEGIN("ssa");

TEST_CASE("general complexity: trivial, linear-only, dominant cubic") {
    ssa::GeneralSystemSpec s;
    s.delta_t_s = 1.0;
    s.delta_f_hz = 1.0;
    s.n_modes = 1.0;
    s.coupling = {{1, 1.0}};
    CHECK(ssa::general_complexity(s) == doctest::Approx(1.0));

    s.coupling = {{1, 50.0}};
    s.n_modes = 7.0;
    CHECK(ssa::general_complexity(s) == doctest::Approx(7.0 * 50.0));

    s.coupling = {{1, 100.0}, {3, 10.0}};  // 10^3 beats 100
    CHECK(ssa::q_max(s) == doctest::Approx(1000.0));
}

TEST_CASE("splitstep ops: worked example lands at 1.43e9, quoted at 5e8") {
    ssa::SplitStepSpec s{5e-3, 1e-6, ssa::parse_frequency("800 THz"), ssa::parse_time("25 ps"), ""};
    const double ops = ssa::splitstep_ops(s);
    CHECK(ops == doctest::Approx(5000.0 * 20000.0 * std::log2(20000.0)).epsilon(1e-12));
    CHECK(ops == doctest::Approx(1.43e9).epsilon(0.005));
    CHECK(ops / 5e8 == doctest::Approx(2.9).epsilon(0.02));  // the documented factor
}

TEST_CASE("splitstep ops: log2(2) = 1 edge and linearity in length") {
    ssa::SplitStepSpec s{1e-3, 1e-6, 2.0, 1.0, ""};  // N_omega = 2
    CHECK(ssa::splitstep_ops(s) == doctest::Approx(1000.0 * 2.0 * 1.0));
    ssa::SplitStepSpec d = s;
    d.length_m *= 2.0;
    CHECK(ssa::splitstep_ops(d) == doctest::Approx(2.0 * ssa::splitstep_ops(s)));
}

TEST_CASE("multimode ops: worked example within 15% of 6.4e18") {
    const double ops = ssa::multimode_ops(3000, 1e4, 1.0, 25e-6);
    CHECK(std::abs(ops - 6.4e18) / 6.4e18 < 0.15);

    CHECK(ssa::multimode_ops(2, 2, 1.0, 1.0) == doctest::Approx(8.0));
    CHECK(ssa::multimode_ops(3000, 1e4, 1.0, 12.5e-6) == doctest::Approx(2.0 * ops));
}

TEST_CASE("oscillator ops: both worked examples") {
    const double small = ssa::oscillator_ops(1e-9, 20e9, 100, 100);
    CHECK(small == doctest::Approx(2.02e5).epsilon(1e-12));
    const double large = ssa::oscillator_ops(1e-9, 20e9, 1e5, 100);
    CHECK(large == doctest::Approx(2.02e8).epsilon(1e-12));
    // the text rounds the larger count to one significant figure
    CHECK(std::round(large / 1e8) * 1e8 == doctest::Approx(2e8));
    CHECK(ssa::oscillator_ops(1e-9, 20e9, 100, 0) == doctest::Approx(20.0 * 100.0));
}

TEST_CASE("transistor ops: worked example is 2.2e7 exactly") {
    const double ops = ssa::transistor_ops(10e-9, 20e9, 100, 10, 100, 10);
    CHECK(ops == doctest::Approx(2.2e7).epsilon(1e-12));
    CHECK(ssa::transistor_ops(1.0, 1.0, 5, 3, 1, 0) == doctest::Approx(15.0));
    CHECK(ssa::transistor_ops(10e-9, 20e9, 200, 10, 100, 10) == doctest::Approx(4.4e7));
}

TEST_CASE("pac: titan rtx and dgx at the quoted 5e8 ops") {
    const auto titan = ssa::pac(5e8, ssa::titan_rtx(), 33e-12, 50.39e-9);
    CHECK(titan.sim_energy_j == doctest::Approx(5e-3).epsilon(0.05));   // ~ 4.9 mJ
    CHECK(titan.sim_time_s == doctest::Approx(16e-6).epsilon(0.05));    // ~ 15.6 us

    const auto dgx = ssa::pac(5e8, ssa::dgx_superpod(), 33e-12, 50.39e-9);
    CHECK(dgx.sim_time_s == doctest::Approx(179e-9).epsilon(0.05));     // ~ 178.6 ns
    CHECK(dgx.sim_energy_j == doctest::Approx(20e-3).epsilon(0.05));    // ~ 19.5 mJ

    const auto unity = ssa::pac(1e6, {"unit", 1e-9, 1e9}, 1e-3, 1e-3);
    CHECK(unity.pac_t == doctest::Approx(1.0));
    CHECK(unity.pac_e == doctest::Approx(1.0));
}

TEST_CASE("energy budgets: both quoted sums") {
    const auto present = ssa::energy_budget({{"slm", 1, ssa::parse_energy("330 pJ")},
                                             {"dac", 20, ssa::parse_energy("1 pJ")},
                                             {"mod", 20, ssa::parse_energy("1 pJ")},
                                             {"det", 20, ssa::parse_energy("1 pJ")},
                                             {"pulse", 1, ssa::parse_energy("50 nJ")}});
    CHECK(present.total_j == doctest::Approx(50.39e-9).epsilon(1e-12));

    const auto future = ssa::energy_budget({{"slm", 1, ssa::parse_energy("33 pJ")},
                                            {"dac", 1, ssa::parse_energy("2 pJ")},
                                            {"mod", 1, ssa::parse_energy("2 pJ")},
                                            {"det", 1, ssa::parse_energy("0.2 pJ")},
                                            {"pulse", 1, ssa::parse_energy("0.5 nJ")}});
    CHECK(future.total_j == doctest::Approx(537.2e-12).epsilon(1e-12));

    CHECK(ssa::energy_budget({}).total_j == 0.0);
}

TEST_CASE("unit parsing is exact over the prefix table") {
    CHECK(ssa::parse_energy("1 J") == 1.0);
    CHECK(ssa::parse_energy("330 pJ") == doctest::Approx(330e-12).epsilon(1e-15));
    CHECK(ssa::parse_energy("10 fJ") == doctest::Approx(10e-15).epsilon(1e-15));
    CHECK(ssa::parse_time("33 ps") == doctest::Approx(33e-12).epsilon(1e-15));
    CHECK(ssa::parse_frequency("800 THz") == doctest::Approx(800e12).epsilon(1e-15));
    CHECK_THROWS_AS(ssa::parse_energy("3 furlongs"), DomainError);
    CHECK_THROWS_AS(ssa::parse_time("fast"), DomainError);
}

TEST_CASE("formulas are homogeneous in their time/step counts") {
    CHECK(ssa::oscillator_ops(2e-9, 20e9, 100, 100) ==
          doctest::Approx(2.0 * ssa::oscillator_ops(1e-9, 20e9, 100, 100)));
    CHECK(ssa::transistor_ops(20e-9, 20e9, 100, 10, 100, 10) ==
          doctest::Approx(2.0 * ssa::transistor_ops(10e-9, 20e9, 100, 10, 100, 10)));
    ssa::GeneralSystemSpec s;
    s.delta_t_s = 1.0;
    s.delta_f_hz = 5.0;
    s.n_modes = 3.0;
    s.coupling = {{2, 4.0}};
    ssa::GeneralSystemSpec s2 = s;
    s2.delta_t_s = 2.0;
    CHECK(ssa::general_complexity(s2) == doctest::Approx(2.0 * ssa::general_complexity(s)));
}

TEST_CASE("presets reproduce the paragraph numbers") {
    const auto* present = ssa::find_preset("shg-present");
    REQUIRE(present != nullptr);
    CHECK(present->budget->total_j == doctest::Approx(50.39e-9).epsilon(1e-12));
    CHECK(*present->quoted_ops == 5e8);

    const auto* future = ssa::find_preset("shg-near-future");
    REQUIRE(future != nullptr);
    CHECK(future->budget->total_j == doctest::Approx(537.2e-12).epsilon(1e-12));

    const auto* osc_small = ssa::find_preset("oscillator-small");
    REQUIRE(osc_small != nullptr);
    CHECK(*osc_small->ops == doctest::Approx(2.02e5).epsilon(1e-12));
    CHECK(osc_small->budget->total_j == doctest::Approx(4.00025e-9).epsilon(1e-9));

    const auto* osc_large = ssa::find_preset("oscillator-large");
    REQUIRE(osc_large != nullptr);
    CHECK(*osc_large->ops == doctest::Approx(2.02e8).epsilon(1e-12));

    const auto* trans = ssa::find_preset("transistor-small");
    REQUIRE(trans != nullptr);
    CHECK(*trans->ops == doctest::Approx(2.2e7).epsilon(1e-12));

    const auto* mm = ssa::find_preset("multimode-fiber");
    REQUIRE(mm != nullptr);
    CHECK(std::abs(*mm->ops - 6.4e18) / 6.4e18 < 0.15);

    // linear multimode frame: ~10 aJ per effective op
    const auto* lin = ssa::find_preset("linear-multimode");
    REQUIRE(lin != nullptr);
    CHECK(*lin->physical_energy_j / *lin->ops == doctest::Approx(10e-18).epsilon(0.25));

    CHECK(ssa::find_preset("nope") == nullptr);
}

TEST_CASE("operational-bottleneck ceilings: the two documented ratios") {
    const auto* mnist = ssa::find_preset("bottleneck-mnist");
    REQUIRE(mnist != nullptr);
    CHECK(*mnist->bottleneck_max_gain == doctest::Approx(1960.0 / 402.0).epsilon(1e-12));
    CHECK(*mnist->bottleneck_max_gain == doctest::Approx(5.0).epsilon(0.05));

    const auto* cifar = ssa::find_preset("bottleneck-cifar");
    REQUIRE(cifar != nullptr);
    const double gain = *cifar->bottleneck_max_gain;
    CHECK(std::log10(gain) > 5.0);
    CHECK(std::log10(gain) < 5.7);
}

TEST_CASE("reports render for every preset") {
    for (const auto& p : ssa::presets()) {
        const std::string j = ssa::report_json(p);
        CHECK(j.find(p.name) != std::string::npos);
        const std::string t = ssa::report_table(p);
        CHECK(t.find("preset: " + p.name) != std::string::npos);
    }
}

TEST_SUITE_END();
