#include "pat/autodiff/ops.hpp"
#include "pat/physics/systems.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace pat;

TEST_SUITE_BEGIN("physics");

// ---- autocorrelation -----------------------------------------------------------

TEST_CASE("autocorrelate: direct evaluation of the sum") {
    RealVector q(4);
    q << 1, 0, 0, 0;
    const RealVector s = ad::autocorrelate(q);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 0.0);
    CHECK(s[3] == 0.0);

    RealVector q2(2);
    q2 << 1, 1;
    const RealVector s2 = ad::autocorrelate(q2);
    CHECK(s2[0] == 1.0);
    CHECK(s2[1] == 1.0);
}

TEST_CASE("autocorrelate: symbolic three-element expansion") {
    const double a = 0.3, b = -0.7, c = 1.9;
    RealVector q(3);
    q << a, b, c;
    const RealVector s = ad::autocorrelate(q);
    CHECK(s[0] == doctest::Approx(a * a).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(b * b + a * c).epsilon(1e-14));
    CHECK(s[2] == doctest::Approx(c * c).epsilon(1e-14));
}

TEST_CASE("autocorrelate is quadratic under nonnegative rescaling") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const RealVector q = test::random_vector(9, rng, 0.0, 1.0);
        for (double alpha : {0.0, 0.5, 2.0}) {
            const RealVector lhs = ad::autocorrelate(alpha * q);
            const RealVector rhs = alpha * alpha * ad::autocorrelate(q);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

// ---- clamp ------------------------------------------------------------------------

TEST_CASE("clamp01 basics") {
    RealVector v(3);
    v << -0.5, 0.3, 1.7;
    const RealVector c = ad::clamp01(v);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.3);
    CHECK(c[2] == 1.0);

    RealVector fixed(2);
    fixed << 0.0, 1.0;
    CHECK(ad::clamp01(fixed) == fixed);

    CHECK(ad::clamp01(RealVector::Constant(5, -2.0)).isZero());
}

// ---- shg surrogate -------------------------------------------------------------------

TEST_CASE("shg_forward: hand evaluation with the central-crop policy") {
    phys::ShgSurrogate sys(2, 1.0, 0.0, false);
    {
        // constant control: q = [.5 .5 .5 .5], s = [.25 .5 .5 .25] (the
        // autocorrelation of a palindromic control is palindromic), central
        // crop = [s1, s2] = [.5 .5], so the normalized output is flat
        const RealVector y =
            phys::shg_forward(sys, RealVector::Constant(2, 0.5), RealVector::Constant(2, 0.5));
        CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
    {
        // asymmetric control: q = [.2 .4 .6 .8]
        // s0 = .04; s1 = .4^2 + .2*.6 = .28; s2 = .6^2 + .4*.8 = .68; s3 = .64
        // crop = [.28, .68], max = .68 -> y = [7/17, 1]
        RealVector x(2), th(2);
        x << 0.2, 0.4;
        th << 0.6, 0.8;
        const RealVector y = phys::shg_forward(sys, x, th);
        CHECK(y[0] == doctest::Approx(7.0 / 17.0).epsilon(1e-14));
        CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("shg_forward: a = 0 collapses to the offset") {
    phys::ShgSurrogate sys(4, 0.0, 0.37, false);
    std::mt19937_64 rng(9);
    const RealVector y =
        phys::shg_forward(sys, test::random_unit_interval(4, rng), test::random_unit_interval(4, rng));
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("shg_forward: output max equals a + c whenever a > 0") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 25; ++t) {
        const double a = 0.2 + t * 0.1, c = -0.4 + t * 0.03;
        phys::ShgSurrogate sys(6, a, c, false);
        const RealVector y = phys::shg_forward(sys, test::random_unit_interval(6, rng),
                                               test::random_unit_interval(6, rng));
        CHECK(y.maxCoeff() == doctest::Approx(a + c).epsilon(1e-12));
    }
}

TEST_CASE("shg degenerate all-zero control raises") {
    phys::ShgSurrogate sys(4);
    CHECK_THROWS_AS(phys::shg_forward(sys, RealVector::Zero(4), RealVector::Zero(4)),
                    DegenerateMaxError);
}

TEST_CASE("shg vjp (trainable scale) matches finite differences") {
    std::mt19937_64 rng(21);
    phys::ShgSurrogate sys(6);  // param layout [theta(6), a, c]
    for (int t = 0; t < 30; ++t) {
        const RealVector x = test::random_unit_interval(6, rng);
        RealVector th(8);
        th.head(6) = test::random_unit_interval(6, rng);
        th[6] = 0.8 + 0.4 * t / 30.0;
        th[7] = -0.2 + 0.4 * t / 30.0;
        const RealVector v = test::random_vector(6, rng);

        const auto pb = sys.vjp(x, th, v);
        const auto fx = [&](const RealVector& z) { return sys.eval(z, th); };
        const auto fth = [&](const RealVector& z) { return sys.eval(x, z); };
        CHECK(test::rel_err(pb.g_x, test::fd_gradient(fx, x, v)) < 1e-4);
        CHECK(test::rel_err(pb.g_theta, test::fd_gradient(fth, th, v)) < 1e-4);
    }
}

TEST_CASE("autocorr stage (100-control) vjp matches finite differences") {
    std::mt19937_64 rng(22);
    phys::AutocorrSystem sys(10, 6, 8);
    for (int t = 0; t < 20; ++t) {
        const RealVector x = test::random_unit_interval(10, rng);
        const RealVector th = test::random_unit_interval(6, rng);
        const RealVector v = test::random_vector(8, rng);
        const auto pb = sys.vjp(x, th, v);
        const auto fx = [&](const RealVector& z) { return sys.eval(z, th); };
        const auto fth = [&](const RealVector& z) { return sys.eval(x, z); };
        CHECK(test::rel_err(pb.g_x, test::fd_gradient(fx, x, v)) < 1e-4);
        CHECK(test::rel_err(pb.g_theta, test::fd_gradient(fth, th, v)) < 1e-4);
    }
}

// ---- plate convolution -------------------------------------------------------------------

TEST_CASE("plate_forward: identity, delay, impulse response") {
    {
        phys::PlateConvolution plate = phys::PlateConvolution::identity(5);
        std::mt19937_64 rng(1);
        const RealVector x = test::random_vector(5, rng);
        CHECK((phys::plate_forward(plate, x) - x).cwiseAbs().maxCoeff() < 1e-15);
    }
    {
        RealVector k = RealVector::Zero(3);
        k[1] = 1.0;  // one-step delay
        phys::PlateConvolution plate(k);
        RealVector x(3);
        x << 1, 2, 3;
        const RealVector y = phys::plate_forward(plate, x);
        CHECK(y[0] == 0.0);
        CHECK(y[1] == 1.0);
        CHECK(y[2] == 2.0);
    }
    {
        std::mt19937_64 rng(2);
        const RealVector k = test::random_vector(6, rng);
        phys::PlateConvolution plate(k);
        const RealVector y = phys::plate_forward(plate, RealVector::Unit(6, 0));
        CHECK((y - k).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("plate_forward is linear to machine precision") {
    std::mt19937_64 rng(4);
    const RealVector k = test::random_vector(12, rng);
    phys::PlateConvolution plate(k);
    for (int t = 0; t < 20; ++t) {
        const RealVector x1 = test::random_vector(12, rng);
        const RealVector x2 = test::random_vector(12, rng);
        const double a = 1.7, b = -0.4;
        const RealVector lhs = phys::plate_forward(plate, a * x1 + b * x2);
        const RealVector rhs =
            a * phys::plate_forward(plate, x1) + b * phys::plate_forward(plate, x2);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("plate vjp matches finite differences") {
    std::mt19937_64 rng(6);
    const RealVector k = test::random_vector(10, rng);
    phys::PlateConvolution plate(k);
    for (int t = 0; t < 20; ++t) {
        const RealVector x = test::random_vector(10, rng);
        const RealVector v = test::random_vector(10, rng);
        const auto pb = plate.vjp(x, RealVector(), v);
        const auto f = [&](const RealVector& z) { return plate.eval(z, RealVector()); };
        CHECK(test::rel_err(pb.g_x, test::fd_gradient(f, x, v)) < 1e-4);
    }
}

// ---- power-law pair -----------------------------------------------------------------------

TEST_CASE("powerlaw_apply basics and domain error") {
    phys::PowerLawPair pair;
    CHECK(phys::powerlaw_apply(pair, phys::PowerLawWhich::True, 1.0, 1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(phys::powerlaw_apply(pair, phys::PowerLawWhich::True, 0.0, 1), DomainError);
    CHECK_THROWS_AS(phys::powerlaw_apply(pair, phys::PowerLawWhich::Model, -1.0, 3), DomainError);
}

TEST_CASE("power-law compounding gap ranges, independent of x") {
    phys::PowerLawPair pair;
    for (double x : {0.5, 1.0, 2.0}) {
        const auto gap = [&](int n) {
            const double t = phys::powerlaw_apply(pair, phys::PowerLawWhich::True, x, n);
            const double m = phys::powerlaw_apply(pair, phys::PowerLawWhich::Model, x, n);
            return std::abs(m - t) / t;
        };
        CHECK(gap(1) == doctest::Approx(0.005).epsilon(0.02));
        CHECK(gap(5) > 0.025);
        CHECK(gap(5) < 0.035);
        CHECK(gap(20) > 0.24);   // text quotes 30%; the exact value is 33.07%
        CHECK(gap(20) < 0.36);
    }
}

// ---- noise wrapper -------------------------------------------------------------------------

TEST_CASE("noise wrapper: zero mixing matrix reproduces the inner system") {
    phys::AdditiveSystem add(3);
    phys::NoiseWrapper noisy(add, RealMatrix::Zero(3, 2), 42);
    std::mt19937_64 rng(1);
    const RealVector x = test::random_vector(3, rng);
    const RealVector th = test::random_vector(3, rng);
    CHECK(noisy.eval(x, th) == add.eval(x, th));
}

TEST_CASE("noise wrapper: sample covariance converges to A A^T") {
    RealMatrix a(2, 2);
    a << 0.5, 0.0, 0.3, 0.2;
    phys::IdentitySystem id2(2);
    phys::NoiseWrapper noisy(id2, a, 7);
    const RealVector x = RealVector::Constant(2, 0.4);

    const int n = 10000;
    std::vector<RealVector> samples;
    samples.reserve(n);
    for (int k = 0; k < n; ++k) samples.push_back(noisy.eval(x, RealVector()));

    RealVector mean = RealVector::Zero(2);
    for (const auto& s : samples) mean += s;
    mean /= n;
    RealMatrix cov = RealMatrix::Zero(2, 2);
    for (const auto& s : samples) cov += (s - mean) * (s - mean).transpose();
    cov /= (n - 1.0);

    const RealMatrix want = a * a.transpose();
    CHECK((cov - want).norm() / want.norm() < 0.10);

    // mean within 3 sigma / sqrt(N) per coordinate
    for (int i = 0; i < 2; ++i) {
        const double sigma = std::sqrt(want(i, i));
        CHECK(std::abs(mean[i] - x[i]) < 3.0 * sigma / std::sqrt(double(n)));
    }
}

TEST_CASE("noise wrapper replays exactly after reset") {
    RealMatrix a = RealMatrix::Identity(2, 2);
    phys::IdentitySystem id2(2);
    phys::NoiseWrapper noisy(id2, a, 99);
    const RealVector x = RealVector::Constant(2, 0.1);
    const RealVector y1 = noisy.eval(x, RealVector());
    const RealVector y2 = noisy.eval(x, RealVector());
    noisy.reset_stream();
    CHECK(noisy.eval(x, RealVector()) == y1);
    CHECK(noisy.eval(x, RealVector()) == y2);
}

TEST_SUITE_END();
