#include "pat/model/noise.hpp"
#include "pat/physics/systems.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace pat;

TEST_SUITE_BEGIN("noise");

TEST_CASE("estimate_covariance: two-sample hand computation") {
    RealVector a(2), b(2);
    a << 1, 0;
    b << -1, 0;
    const auto est = model::estimate_covariance({a, b});
    CHECK(est.mean.isZero());
    CHECK(est.cov(0, 0) == doctest::Approx(2.0));  // divisor N-1 = 1
    CHECK(est.cov(0, 1) == 0.0);
    CHECK(est.cov(1, 1) == 0.0);
}

TEST_CASE("estimate_covariance: identical samples, zero covariance") {
    RealVector v(3);
    v << 0.2, -0.4, 1.0;
    const auto est = model::estimate_covariance({v, v, v, v});
    CHECK(est.cov.isZero(1e-15));
    CHECK(est.mean == v);
}

TEST_CASE("estimate_covariance rejects fewer than two samples") {
    CHECK_THROWS_AS(model::estimate_covariance({RealVector::Zero(2)}), InsufficientDataError);
}

TEST_CASE("estimate_covariance: standard normal draws converge to identity") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<RealVector> samples;
    const int n = 100000;
    samples.reserve(n);
    for (int k = 0; k < n; ++k) {
        RealVector s(2);
        s << gauss(rng), gauss(rng);
        samples.push_back(std::move(s));
    }
    const auto est = model::estimate_covariance(samples);
    CHECK(std::abs(est.cov(0, 0) - 1.0) < 0.05);
    CHECK(std::abs(est.cov(1, 1) - 1.0) < 0.05);
    CHECK(std::abs(est.cov(0, 1)) < 0.05);
}

TEST_CASE("build_mixing_matrix: identity covariance reconstructs exactly") {
    model::CovarianceEstimate est;
    est.mean = RealVector::Zero(2);
    est.cov = RealMatrix::Identity(2, 2);
    const RealMatrix a = model::build_mixing_matrix(est, 2);
    CHECK(((a * a.transpose()) - est.cov).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_mixing_matrix: rank-1 eigenproblem by hand") {
    RealVector v(2);
    v << 3, 4;
    model::CovarianceEstimate est;
    est.mean = RealVector::Zero(2);
    est.cov = v * v.transpose();  // eigenvalue 25, unit eigenvector [0.6, 0.8]
    const RealMatrix a = model::build_mixing_matrix(est, 1);
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 1);
    CHECK(std::abs(a(0, 0)) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::abs(a(1, 0)) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(a(1, 0) > 0.0);  // sign convention: largest-magnitude entry positive
    CHECK(((a * a.transpose()) - est.cov).norm() < 1e-10);
}

TEST_CASE("build_mixing_matrix: full-rank reconstruction below 1e-10") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const int d = 5;
        RealMatrix b(d, d);
        for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = test::random_vector(1, rng)[0];
        model::CovarianceEstimate est;
        est.mean = RealVector::Zero(d);
        est.cov = b * b.transpose();
        const RealMatrix a = model::build_mixing_matrix(est, d);
        CHECK(((a * a.transpose()) - est.cov).norm() / est.cov.norm() < 1e-10);
    }
}

TEST_CASE("build_mixing_matrix: truncation beats random rank-k factors") {
    std::mt19937_64 rng(19);
    const int d = 6, k = 2;
    RealMatrix b(d, d);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = test::random_vector(1, rng)[0];
    model::CovarianceEstimate est;
    est.mean = RealVector::Zero(d);
    est.cov = b * b.transpose();
    const RealMatrix a = model::build_mixing_matrix(est, k);
    const double best = ((a * a.transpose()) - est.cov).norm();
    for (int t = 0; t < 100; ++t) {
        RealMatrix r(d, k);
        for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = test::random_vector(1, rng)[0];
        CHECK(best <= ((r * r.transpose()) - est.cov).norm() + 1e-12);
    }
}

TEST_CASE("build_mixing_matrix rejects non-PSD input") {
    model::CovarianceEstimate est;
    est.mean = RealVector::Zero(2);
    est.cov = RealMatrix::Identity(2, 2);
    est.cov(1, 1) = -0.5;
    CHECK_THROWS_AS(model::build_mixing_matrix(est, 1), NumericError);
    CHECK_THROWS_AS(model::build_mixing_matrix(est, 0), DimensionError);
}

TEST_CASE("mixing-matrix sampling has the right empirical covariance") {
    // n = A z over many draws: entrywise within 5 statistical sigmas.
    RealMatrix a(3, 2);
    a << 0.4, 0.0, 0.1, 0.3, -0.2, 0.2;
    phys::IdentitySystem id3(3);
    phys::NoiseWrapper noisy(id3, a, 5);
    const RealVector x = RealVector::Zero(3);

    const int n = 100000;
    std::vector<RealVector> samples;
    samples.reserve(n);
    for (int k = 0; k < n; ++k) samples.push_back(noisy.eval(x, RealVector()));
    const auto est = model::estimate_covariance(samples);
    const RealMatrix want = a * a.transpose();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double sigma =
                std::sqrt((want(i, i) * want(j, j) + want(i, j) * want(i, j)) / n);
            CHECK(std::abs(est.cov(i, j) - want(i, j)) < 5.0 * sigma + 1e-12);
        }
    }
}

namespace {

std::vector<std::pair<RealVector, RealVector>> probe_grid(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<RealVector, RealVector>> probes;
    probes.reserve(n);
    for (int k = 0; k < n; ++k) {
        probes.emplace_back(test::random_vector(2, rng, 0.2, 1.0), RealVector());
    }
    return probes;
}

}  // namespace

TEST_CASE("fit_noise_model: noiseless system predicts (near) zero noise") {
    phys::IdentitySystem id2(2);
    phys::NoiseWrapper quiet(id2, RealMatrix::Zero(2, 1), 3);
    const auto nm = model::fit_noise_model(quiet, probe_grid(60, 4), 10, 1);
    CHECK(nm.predictor.report.val_mse < 1e-4);
    CHECK(nm.val_reconstruction_error < 0.01);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        const RealMatrix a = nm.predict_mixing(test::random_vector(2, rng, 0.2, 1.0), RealVector());
        CHECK(a.norm() < 0.01);  // sampled noise ~ 0 on the unit output scale
    }
}

TEST_CASE("fit_noise_model: input-independent fixed mixing matrix") {
    RealMatrix a_true(2, 2);
    a_true << 0.5, 0.0, 0.2, 0.3;
    phys::IdentitySystem id2(2);
    phys::NoiseWrapper noisy(id2, a_true, 21);
    model::NoiseFitConfig cfg;
    cfg.seed = 2;
    const auto nm = model::fit_noise_model(noisy, probe_grid(240, 6), 60, 2, cfg);

    const RealMatrix want = a_true * a_true.transpose();
    std::mt19937_64 rng(10);
    double err = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const RealMatrix a = nm.predict_mixing(test::random_vector(2, rng, 0.2, 1.0), RealVector());
        err += ((a * a.transpose()) - want).norm() / want.norm();
    }
    CHECK(err / trials < 0.15);
}

TEST_CASE("fit_noise_model: diagonal input-dependent noise tracks x^2") {
    phys::IdentitySystem id2(2);
    phys::NoiseWrapper noisy(
        id2,
        [](const RealVector& x, const RealVector&) {
            RealMatrix a = RealMatrix::Zero(2, 2);
            a(0, 0) = x[0];
            a(1, 1) = x[1];
            return a;
        },
        2, 23);
    model::NoiseFitConfig cfg;
    cfg.seed = 5;
    cfg.epochs = 900;
    const auto nm = model::fit_noise_model(noisy, probe_grid(500, 8), 100, 2, cfg);

    std::mt19937_64 rng(11);
    double err = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const RealVector x = test::random_vector(2, rng, 0.3, 1.0);
        const RealMatrix a = nm.predict_mixing(x, RealVector());
        const RealMatrix cov = a * a.transpose();
        err += (std::abs(cov(0, 0) - x[0] * x[0]) + std::abs(cov(1, 1) - x[1] * x[1])) /
               (x[0] * x[0] + x[1] * x[1]);
    }
    CHECK(err / trials < 0.20);
}

TEST_SUITE_END();
