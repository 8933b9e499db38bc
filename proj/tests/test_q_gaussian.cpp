#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qgeom/numerics.hpp"
#include "qgeom/q_gaussian.hpp"

using namespace qgeom;
using doctest::Approx;

TEST_CASE("normalisation constant") {
    CHECK(gaussian::normalization_Z(1.0) == Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(gaussian::normalization_Z(2.0) == Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(gaussian::normalization_Z(0.0) == Approx(std::sqrt(3.0) * 4.0 / 3.0).epsilon(1e-15));
    CHECK(gaussian::normalization_Z(1.5) == Approx(2.7206990463513268).epsilon(1e-14));
    CHECK(gaussian::normalization_Z(2.5) == Approx(4.2065463159763628).epsilon(1e-14));
    CHECK_THROWS_AS(gaussian::normalization_Z(3.0), DomainError);
    CHECK_THROWS_AS(QGaussian(2.9995, LocationScale(0.0, 1.0)), DomainError);
}

TEST_CASE("LocationScale validation") {
    CHECK_THROWS_AS(LocationScale(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(LocationScale(0.0, -1.0), DomainError);
    CHECK_THROWS_AS(LocationScale(NAN, 1.0), DomainError);
}

TEST_CASE("density values and normalisation") {
    const QGaussian normal(1.0, LocationScale(0.0, 1.0));
    CHECK(gaussian::density(normal, 0.0) == Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(gaussian::density(normal, 1.0) ==
          Approx(std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    const QGaussian cauchy_like(2.0, LocationScale(1.0, 2.0));
    CHECK(gaussian::density(cauchy_like, 1.0) == Approx(1.0 / (2.0 * std::numbers::pi)));

    QuadratureConfig config;
    config.rel_tol = 1e-11;
    for (double q : {1.0, 1.5, 2.0, 2.5, 0.0, -1.0}) {
        const QGaussian m(q, LocationScale(0.7, 1.3));
        const IntegralEstimate mass = numerics::integrate_real_line(
            [&](double x) { return gaussian::density(m, x); }, config.centered(0.7, 1.3));
        CHECK(std::abs(mass.value - 1.0) <= 1e-8);
    }
    // Compact support for q < 1.
    const QGaussian compact(0.0, LocationScale(0.0, 1.0));
    CHECK(gaussian::density(compact, 2.0) == 0.0);
}

TEST_CASE("likelihood closed form") {
    const QGaussian normal(1.0, LocationScale(0.0, 1.0));
    CHECK(gaussian::likelihood_lq(normal, 0.0) ==
          Approx(-std::log(std::sqrt(2.0 * std::numbers::pi))).epsilon(1e-15));
    CHECK(gaussian::likelihood_lq(normal, 1.0) ==
          Approx(-std::log(std::sqrt(2.0 * std::numbers::pi)) - 0.5).epsilon(1e-15));
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        const QGaussian m(q, LocationScale(-0.4, 2.0));
        for (double x : {-5.0, -0.4, 0.3, 9.0}) {
            CHECK(gaussian::likelihood_lq(m, x) ==
                  Approx(deformed::ln_q(gaussian::density(m, x), q)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(gaussian::likelihood_lq(QGaussian(1.0, LocationScale(0.0, 0.3)), 0.0),
                    DomainError);
}

TEST_CASE("likelihood gradient") {
    const double h = 1e-5;
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        const LocationScale xi(0.5, 1.7);
        const QGaussian m(q, xi);
        CHECK(gaussian::likelihood_grad(m, 0.5).d_mu == 0.0);
        CHECK(std::abs(gaussian::likelihood_grad(m, 0.5 + 1.7).d_sigma) <= 1e-13);
        CHECK(std::abs(gaussian::likelihood_grad(m, 0.5 - 1.7).d_sigma) <= 1e-13);
        for (double x : {-2.0, 0.9, 4.0}) {
            auto at = [&](double mu, double sigma) {
                return gaussian::likelihood_lq(QGaussian(q, LocationScale(mu, sigma)), x);
            };
            const double fd_mu = (at(xi.mu + h, xi.sigma) - at(xi.mu - h, xi.sigma)) / (2 * h);
            const double fd_sigma = (at(xi.mu, xi.sigma + h) - at(xi.mu, xi.sigma - h)) / (2 * h);
            const gaussian::LikelihoodGradient g = gaussian::likelihood_grad(m, x);
            CHECK(g.d_mu == Approx(fd_mu).epsilon(1e-7));
            CHECK(g.d_sigma == Approx(fd_sigma).epsilon(1e-7));
        }
    }
}

TEST_CASE("escort weight") {
    const QGaussian m2(2.0, LocationScale(0.0, 1.0));
    for (double x : {0.0, 1.5}) {
        const double p = gaussian::density(m2, x);
        CHECK(gaussian::escort_weight(DeformationParams(2.0, 1.0), m2, x) == Approx(p * p));
    }
    const QGaussian n(1.0, LocationScale(0.0, 1.0));
    CHECK(gaussian::escort_weight(DeformationParams(1.0, 1.0), n, 0.3) ==
          Approx(gaussian::density(n, 0.3)));
    const double p = gaussian::density(m2, 0.8);
    CHECK(gaussian::escort_weight(DeformationParams(2.0, 0.5), m2, 0.8) ==
          Approx(std::pow(-deformed::ln_q(p, 2.0), 0.5) * p * p));
    CHECK_THROWS_AS(gaussian::escort_weight(DeformationParams(1.5, 1.0), m2, 0.0), DomainError);
}

TEST_CASE("parameter sets") {
    CHECK(gaussian::in_sigma_q(1.0, 1.0));
    CHECK_FALSE(gaussian::in_sigma_q(1.0, 0.3));
    CHECK(gaussian::in_sigma_q(2.0, 1.0));
    CHECK(gaussian::in_sigma_qa(DeformationParams(1.0, 1.0), 1.0));
    CHECK(gaussian::in_sigma_qa(DeformationParams(2.0, 1.0), 1.0));
    CHECK_FALSE(gaussian::in_sigma_qa(DeformationParams(2.0, 2.0), 1.0 / std::numbers::pi));
    // a = 1/2 tightens the bound to 1/(Z sigma) < exp(-1/2).
    const double edge = std::exp(0.5) / std::sqrt(2.0 * std::numbers::pi);
    CHECK_FALSE(gaussian::in_sigma_qa(DeformationParams(1.0, 0.5), edge * 0.999));
    CHECK(gaussian::in_sigma_qa(DeformationParams(1.0, 0.5), edge * 1.001));
    CHECK_THROWS_AS(gaussian::in_sigma_qa(DeformationParams(2.0, -1.0), 1.0), DomainError);
}

TEST_CASE("integrability tests") {
    CHECK(gaussian::escort_moment_integrable(DeformationParams(1.0, 0.5), 50.0));
    CHECK(gaussian::escort_moment_integrable(DeformationParams(2.0, 1.0), 1.0));
    CHECK_FALSE(gaussian::escort_moment_integrable(DeformationParams(2.0, 1.0), 2.0));
    for (double q : {1.2, 2.0, 2.9}) {
        for (int n = 1; n <= 4; ++n) {
            CHECK(gaussian::power_moment_integrable(q, n, n));
        }
    }
    CHECK_FALSE(gaussian::power_moment_integrable(2.0, 1, 2.0));
    CHECK(gaussian::power_moment_integrable(1.0, 1, 100.0));
}

TEST_CASE("likelihood kernel agrees with the free functions") {
    const QGaussian m(1.5, LocationScale(2.0, 3.0));
    const gaussian::LikelihoodKernel k(m);
    for (double x : {-10.0, 2.0, 5.5}) {
        CHECK(k.likelihood(x) == Approx(gaussian::likelihood_lq(m, x)).epsilon(1e-15));
        CHECK(k.density(x) == Approx(gaussian::density(m, x)).epsilon(1e-14));
        CHECK(k.gradient(x).d_sigma == Approx(gaussian::likelihood_grad(m, x).d_sigma));
    }
    CHECK(k.peak_neg_likelihood() > 0.0);
}

TEST_CASE("log-space kernel accessors") {
    for (double q : {1.0, 1.5, 2.0, 2.9}) {
        const gaussian::LikelihoodKernel k(QGaussian(q, LocationScale(0.5, 1.5)));
        for (double x : {-3.0, 0.5, 2.0, 40.0, 1e6}) {
            if (k.density(x) == 0.0) {
                continue;  // the Gaussian tail at 1e6 underflows
            }
            CHECK(k.log_density(x) == Approx(std::log(k.density(x))).epsilon(1e-13));
            CHECK(k.log_neg_likelihood(x) == Approx(std::log(k.neg_likelihood(x))).epsilon(1e-13));
        }
    }
    // Far enough out that -l_q overflows while the log stays finite.
    const gaussian::LikelihoodKernel k(QGaussian(2.9, LocationScale(0.0, 1.0)));
    const double x = 1e160;
    CHECK(std::isinf(k.neg_likelihood(x)));
    CHECK(k.log_neg_likelihood(x) ==
          Approx(std::log(k.quadratic_coefficient()) + 2.0 * std::log(x)).epsilon(1e-14));
    CHECK(k.log_density(x) ==
          Approx(-(std::log(1.9 / 0.1) + 2.0 * std::log(x)) / 1.9 - std::log(k.z_sigma()))
              .epsilon(1e-14));
}
