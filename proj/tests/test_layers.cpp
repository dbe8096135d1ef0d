#include "pat/nn/builders.hpp"
#include "pat/nn/layers.hpp"
#include "pat/nn/pnn.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace pat;

TEST_SUITE_BEGIN("layers");

namespace {

// Checks d(v^T model(x)) against finite differences in both the input and
// every trainable parameter; the total loss here is the linear probe alone.
void check_model_vjp(nn::PnnModel& m, const RealVector& x, std::mt19937_64& rng,
                     double tol = 1e-4) {
    const RealVector v = test::random_vector(m.output_dim(), rng);
    const auto fwd = m.forward(x, {});
    const auto back = m.backward(fwd, v, {});

    const auto f_of_x = [&](const RealVector& z) { return m.forward(z, {}).output; };
    CHECK(test::rel_err(back.g_input, test::fd_gradient(f_of_x, x, v)) < tol);

    const RealVector p0 = m.parameter_vector();
    if (p0.size() > 0) {
        const auto f_of_p = [&](const RealVector& p) {
            m.set_parameter_vector(p);
            const RealVector out = m.forward(x, {}).output;
            return out;
        };
        const RealVector fd = test::fd_gradient(f_of_p, p0, v);
        m.set_parameter_vector(p0);
        CHECK(test::rel_err(back.grads.flatten(), fd) < tol);
    }
}

nn::PnnModel single(std::unique_ptr<nn::Layer> l) {
    nn::PnnModel m;
    m.layers.push_back(std::move(l));
    m.finalize();
    return m;
}

}  // namespace

TEST_CASE("every digital layer kind matches finite differences at 50 points") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 50; ++t) {
        // boundary-adjacent inputs included: narrow margin on purpose
        const double margin = (t % 5 == 0) ? 0.01 : 0.2;

        {
            auto m = single(std::make_unique<nn::RepeatLayer>(6, 3));
            check_model_vjp(m, test::random_vector(6, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::ScalarRescaleLayer>(5));
            m.layers[0]->params()[0] = 1.3;
            m.layers[0]->params()[1] = -0.2;
            check_model_vjp(m, test::random_vector(5, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::ElementwiseRescaleLayer>(4));
            m.layers[0]->params() = test::random_vector(8, rng, 0.5, 1.5);
            check_model_vjp(m, test::random_vector(4, rng), rng);
        }
        {
            auto m = single(
                std::make_unique<nn::ConcatParamsLayer>(3, test::random_vector(4, rng, 0.0, 1.0)));
            check_model_vjp(m, test::random_vector(3, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::RenormRescaleLayer>(6));
            m.layers[0]->params()[0] = 0.9;
            m.layers[0]->params()[1] = 0.1;
            RealVector x = test::random_vector(6, rng, margin, 1.0);
            x[2] += 1.0;  // strict argmax
            check_model_vjp(m, x, rng);
        }
        {
            auto m = single(std::make_unique<nn::CropLayer>(7, 2, 4));
            check_model_vjp(m, test::random_vector(7, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::BinSumLayer>(8, 2));
            check_model_vjp(m, test::random_vector(8, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::BinSumLayer>(9, 3, /*average=*/true));
            check_model_vjp(m, test::random_vector(9, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::SoftmaxTLayer>(5, 0.7 + 0.01 * t));
            check_model_vjp(m, test::random_vector(5, rng), rng);
        }
    }
}

TEST_CASE("physical layer with shg and plate systems matches finite differences") {
    std::mt19937_64 rng(43);
    phys::ShgSurrogate shg(6);
    phys::PlateConvolution plate = phys::PlateConvolution::damped_cosine(10, 4.0, 0.4);
    for (int t = 0; t < 50; ++t) {
        {
            RealVector init(8);
            init.head(6) = test::random_unit_interval(6, rng);
            init[6] = 1.1;
            init[7] = 0.05;
            auto m = single(std::make_unique<nn::PhysicalLayer>(shg, init, 6));
            check_model_vjp(m, test::random_unit_interval(6, rng), rng);
        }
        {
            auto m = single(std::make_unique<nn::PhysicalLayer>(plate, RealVector(), 0));
            check_model_vjp(m, test::random_vector(10, rng), rng);
        }
    }
}

TEST_CASE("combinators: skip-add and ensemble-sum match finite differences") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 50; ++t) {
        {
            nn::LayerStack inner;
            inner.push_back(std::make_unique<nn::ElementwiseRescaleLayer>(4));
            inner.back()->params() = test::random_vector(8, rng, 0.5, 1.5);
            auto m = single(std::make_unique<nn::SkipAddLayer>(std::move(inner), 0.8));
            check_model_vjp(m, test::random_vector(4, rng), rng);
        }
        {
            std::vector<nn::LayerStack> branches;
            for (int b = 0; b < 3; ++b) {
                nn::LayerStack branch;
                branch.push_back(std::make_unique<nn::ElementwiseRescaleLayer>(4));
                branch.back()->params() = test::random_vector(8, rng, 0.5, 1.5);
                branch.push_back(std::make_unique<nn::BinSumLayer>(4, 2));
                branches.push_back(std::move(branch));
            }
            auto m = single(std::make_unique<nn::EnsembleSumLayer>(std::move(branches)));
            check_model_vjp(m, test::random_vector(4, rng), rng);
        }
    }
}

TEST_CASE("renorm rescale raises on a non-positive maximum") {
    auto m = single(std::make_unique<nn::RenormRescaleLayer>(3));
    CHECK_THROWS_AS(m.forward(RealVector::Constant(3, -1.0), {}), DegenerateMaxError);
}

// ---- loss ------------------------------------------------------------------------

TEST_CASE("mse loss and error vector") {
    nn::LossSpec spec;
    spec.primary = nn::PrimaryLoss::Mse;
    RealVector out(2), target(2);
    out << 1, 2;
    target << 0, 0;
    const auto r = nn::loss_and_error_vector(spec, out, nn::LossTarget::vec(target), {});
    CHECK(r.value == doctest::Approx(5.0));
    CHECK(r.g_output[0] == doctest::Approx(2.0));
    CHECK(r.g_output[1] == doctest::Approx(4.0));
}

TEST_CASE("cross-entropy at uniform logits over 7 classes") {
    nn::LossSpec spec;
    const RealVector o = RealVector::Zero(7);
    const auto r = nn::loss_and_error_vector(spec, o, nn::LossTarget::cls(0), {});
    CHECK(r.value == doctest::Approx(std::log(7.0)).epsilon(1e-12));
    CHECK(r.g_output[0] == doctest::Approx(1.0 / 7.0 - 1.0).epsilon(1e-12));
    for (int i = 1; i < 7; ++i) CHECK(r.g_output[i] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("softmax cross-entropy gradient sums to zero over classes") {
    std::mt19937_64 rng(45);
    nn::LossSpec spec;
    for (int t = 0; t < 30; ++t) {
        const RealVector o = test::random_vector(7, rng, -3.0, 3.0);
        const auto r = nn::loss_and_error_vector(spec, o, nn::LossTarget::cls(t % 7), {});
        CHECK(std::abs(r.g_output.sum()) < 1e-12);
    }
}

TEST_CASE("invalid class index raises") {
    nn::LossSpec spec;
    CHECK_THROWS_AS(nn::loss_and_error_vector(spec, RealVector::Zero(7), nn::LossTarget::cls(7), {}),
                    DomainError);
}

TEST_CASE("constraint penalty: hand evaluation and zero-iff-in-bounds") {
    nn::ConstraintTerm term{nn::ConstraintTerm::Target::Inputs, 1.0, 0.0, 1.0, false};
    nn::BoundedControl c;
    c.input = RealVector(3);
    c.input << -0.1, 0.5, 1.2;
    CHECK(nn::constraint_penalty(term, {c}) == doctest::Approx(0.3).epsilon(1e-12));

    c.input << 0.0, 0.5, 1.0;  // exactly at the bounds: zero penalty
    CHECK(nn::constraint_penalty(term, {c}) == 0.0);

    std::mt19937_64 rng(46);
    for (int t = 0; t < 20; ++t) {
        c.input = test::random_vector(6, rng, 0.0, 1.0);
        CHECK(nn::constraint_penalty(term, {c}) == 0.0);
        c.input[0] = 1.0 + 0.1 * (t + 1);
        CHECK(nn::constraint_penalty(term, {c}) > 0.0);
    }
}

TEST_CASE("averaged constraint divides by the vector length") {
    nn::ConstraintTerm term{nn::ConstraintTerm::Target::Params, 0.5, 0.0, 1.0, true};
    nn::BoundedControl c;
    c.ctrl_params = RealVector(4);
    c.ctrl_params << 2.0, 0.5, 0.5, 0.5;  // excess 1.0 over 4 entries
    CHECK(nn::constraint_penalty(term, {c}) == doctest::Approx(0.5 * 1.0 / 4.0));
}

// ---- builders -----------------------------------------------------------------------

TEST_CASE("vowel-numerical builder: 12 -> 7 with the documented pair map") {
    phys::ShgSurrogate shg(24);
    auto m = nn::build_vowel_numerical(3, shg, 1);
    CHECK(m.input_dim() == 12);
    CHECK(m.output_dim() == 7);
    CHECK(m.physical_layers().size() == 3);
    CHECK(m.loss.constraints.size() == 2);
    CHECK(m.loss.constraints[0].lambda == 0.02);
    CHECK(m.loss.constraints[0].v_min == 0.0);
    CHECK(m.loss.constraints[0].v_max == 1.0);

    // identity-stub physical layer: o sums the designated pairs of the input
    phys::IdentitySystem id24(24);
    auto stub = nn::build_vowel_numerical(1, id24, 1);
    RealVector x(12);
    for (int i = 0; i < 12; ++i) x[i] = i + 1;
    const RealVector o = stub.forward(x, {}).output;
    // repeated input: y = [1,1,2,2,...]; o_i = y_{2i+3} + y_{2i+4} (one-based)
    for (int i = 1; i <= 7; ++i) {
        const double want = std::ceil((2.0 * i + 3.0) / 2.0) + std::ceil((2.0 * i + 4.0) / 2.0);
        CHECK(o[i - 1] == doctest::Approx(want));
    }
}

TEST_CASE("shg-vowel builder: dims, parameter budget, crop chain") {
    phys::AutocorrSystem sys(100, 0, 50);
    auto m = nn::build_shg_vowel(5, sys, 2);
    CHECK(m.input_dim() == 12);
    CHECK(m.output_dim() == 7);

    // physical control parameters: 52 + 4 x 50
    Eigen::Index phys_params = 0;
    for (const auto& l : m.layers) {
        if (std::string(l->kind()) == "ConcatParams") phys_params += l->param_count();
    }
    CHECK(phys_params == 252);

    // crop then bin-sum maps 50 -> 21 -> 7
    bool saw_crop = false, saw_bin = false;
    for (const auto& l : m.layers) {
        if (std::string(l->kind()) == "Crop") {
            CHECK(l->input_dim() == 50);
            CHECK(l->output_dim() == 21);
            saw_crop = true;
        }
        if (std::string(l->kind()) == "BinSum" && l->input_dim() == 21) {
            CHECK(l->output_dim() == 7);
            saw_bin = true;
        }
    }
    CHECK(saw_crop);
    CHECK(saw_bin);

    CHECK(m.loss.constraints.size() == 2);
    CHECK(m.loss.constraints[0].lambda == 0.5);
    CHECK(m.loss.constraints[0].averaged);
    CHECK(m.loss.constraints[1].lambda == 2.0);

    // forward runs end to end
    std::mt19937_64 rng(3);
    const RealVector out = m.forward(test::random_unit_interval(12, rng), {}).output;
    CHECK(out.size() == 7);
    CHECK(out.allFinite());
}

TEST_CASE("plate classifier builder: 10-d output and identity reduction") {
    const int d = 196;
    phys::PlateConvolution plate = phys::PlateConvolution::damped_cosine(d, 40.0, 0.3);
    auto m = nn::build_plate_classifier(plate);
    CHECK(m.input_dim() == d);
    CHECK(m.output_dim() == 10);

    // identity plate with frozen unit rescales reduces to crop+average of x
    phys::PlateConvolution ident = phys::PlateConvolution::identity(d);
    auto frozen = nn::build_plate_classifier(ident);
    std::mt19937_64 rng(5);
    const RealVector x = test::random_vector(d, rng, 0.0, 1.0);
    const RealVector out = frozen.forward(x, {}).output;
    for (int i = 0; i < 10; ++i) {
        double want = 0.0;
        for (int j = 0; j < 5; ++j) want += x[d - 61 + 5 * i + j];
        CHECK(out[i] == doctest::Approx(want / 5.0).epsilon(1e-12));
    }
}

TEST_CASE("builder dim chains validate without running data") {
    phys::ShgSurrogate shg(24);
    CHECK_NOTHROW(nn::build_vowel_numerical(1, shg, 7));
    CHECK_NOTHROW(nn::build_vowel_numerical(5, shg, 7));
    phys::AutocorrSystem sys(100, 0, 50);
    CHECK_NOTHROW(nn::build_shg_vowel(2, sys, 7));
    phys::IdentitySystem wrong(10);
    CHECK_THROWS_AS(nn::build_vowel_numerical(1, wrong, 7), DimensionError);
}

TEST_CASE("full vowel model gradient matches finite differences") {
    std::mt19937_64 rng(47);
    phys::ShgSurrogate shg(24);
    auto m = nn::build_vowel_numerical(2, shg, 11);
    // nudge a, c off (1, 0): that init pins each stage's max output exactly on
    // the clamp kink of the next stage, where the subgradient convention and a
    // finite-difference stencil legitimately disagree
    for (auto* pl : m.physical_layers()) {
        pl->params()[24] = 0.93;
        pl->params()[25] = 0.04;
    }

    // total loss incl. constraints, differentiated in every parameter
    const RealVector x = test::random_unit_interval(12, rng);
    const int target = 3;
    const auto fwd = m.forward(x, {});
    const auto lr = nn::loss_and_error_vector(m.loss, fwd.output, nn::LossTarget::cls(target),
                                              fwd.controls);
    const auto back = m.backward(fwd, lr.g_output, {});

    const RealVector p0 = m.parameter_vector();
    const auto loss_of_p = [&](const RealVector& p) {
        m.set_parameter_vector(p);
        const auto f = m.forward(x, {});
        const auto l = nn::loss_and_error_vector(m.loss, f.output, nn::LossTarget::cls(target),
                                                 f.controls);
        return RealVector::Constant(1, l.value);
    };
    const RealVector fd = test::fd_gradient(loss_of_p, p0, RealVector::Ones(1));
    m.set_parameter_vector(p0);
    CHECK(test::rel_err(back.grads.flatten(), fd) < 1e-4);
}

TEST_SUITE_END();
