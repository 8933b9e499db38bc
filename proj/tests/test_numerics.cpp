#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "qgeom/deformed.hpp"
#include "qgeom/error.hpp"
#include "qgeom/numerics.hpp"

using namespace qgeom;
using doctest::Approx;

TEST_CASE("log_gamma and beta") {
    CHECK(numerics::log_gamma(1.0) == Approx(0.0));
    CHECK(numerics::log_gamma(0.5) == Approx(std::log(std::sqrt(std::numbers::pi))).epsilon(1e-15));
    CHECK(numerics::log_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-15));
    CHECK(numerics::log_gamma(200.5) == Approx(860.58220350978324).epsilon(1e-14));
    CHECK_THROWS_AS(numerics::log_gamma(0.0), DomainError);

    CHECK(numerics::beta(0.5, 0.5) == Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(numerics::beta(1.0, 1.0) == Approx(1.0));
    CHECK(numerics::beta(2.0, 0.5) == Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(numerics::beta(-1.0, 1.0), DomainError);
}

TEST_CASE("beta matches its integral representation") {
    // B(3/2, 1/2) = int_0^inf r^{1/2} (1 + r)^{-2} dr.
    auto f = [](double r) { return std::sqrt(r) / ((1.0 + r) * (1.0 + r)); };
    QuadratureConfig config;
    config.abs_tol = 1e-12;
    const IntegralEstimate est = numerics::integrate_interval(
        [&](double x) { return x > 0.0 ? f(x) : 0.0; }, 0.0, 1.0, config);
    const IntegralEstimate tail = numerics::integrate_real_line(
        [&](double x) { return x > 1.0 ? f(x) : 0.0; }, config.centered(1.0, 1.0));
    CHECK(est.value + tail.value == Approx(numerics::beta(1.5, 0.5)).epsilon(1e-9));
}

TEST_CASE("double factorial") {
    CHECK(numerics::double_factorial_odd(0) == 1.0);
    CHECK(numerics::double_factorial_odd(1) == 1.0);
    CHECK(numerics::double_factorial_odd(2) == 3.0);
    CHECK(numerics::double_factorial_odd(3) == 15.0);
    CHECK(numerics::double_factorial_odd(5) == 945.0);
    CHECK_THROWS_AS(numerics::double_factorial_odd(-1), DomainError);
}

TEST_CASE("real-line quadrature") {
    const QuadratureConfig config;
    const IntegralEstimate gauss = numerics::integrate_real_line(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); },
        config);
    CHECK(gauss.converged);
    CHECK(std::abs(gauss.value - 1.0) <= 1e-10);
    CHECK(gauss.evaluations >= numerics::minimum_evaluations());

    const IntegralEstimate cauchy =
        numerics::integrate_real_line([](double x) { return 1.0 / (1.0 + x * x); }, config);
    CHECK(cauchy.converged);
    CHECK(std::abs(cauchy.value - std::numbers::pi) <= 1e-10);

    const IntegralEstimate q2 = numerics::integrate_real_line(
        [](double x) { return deformed::rexp_q(-x * x, 2.0); }, config);
    CHECK(std::abs(q2.value - std::numbers::pi) <= 1e-9);
}

TEST_CASE("heavy x^{-4/3} tails are resolved") {
    // int (1 + x^2)^{-2/3} dx = sqrt(pi) Gamma(1/6) / Gamma(2/3).
    const double exact = std::sqrt(std::numbers::pi) * std::tgamma(1.0 / 6.0) / std::tgamma(2.0 / 3.0);
    const IntegralEstimate est = numerics::integrate_real_line(
        [](double x) { return std::pow(1.0 + x * x, -2.0 / 3.0); }, QuadratureConfig{});
    CHECK(est.converged);
    CHECK(est.value == Approx(exact).epsilon(1e-9));
}

TEST_CASE("shifted and scaled integrands") {
    const QuadratureConfig config = QuadratureConfig{}.centered(300.0, 0.01);
    const IntegralEstimate est = numerics::integrate_real_line(
        [](double x) {
            const double u = (x - 300.0) / 0.01;
            return std::exp(-0.5 * u * u) / (0.01 * std::sqrt(2.0 * std::numbers::pi));
        },
        config);
    CHECK(std::abs(est.value - 1.0) <= 1e-10);
}

TEST_CASE("quadrature failure modes") {
    QuadratureConfig tight;
    tight.max_evaluations = numerics::minimum_evaluations();
    const IntegralEstimate est = numerics::integrate_real_line(
        [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.123)); }, tight);
    CHECK_FALSE(est.converged);
    CHECK(est.evaluations <= tight.max_evaluations);

    CHECK_THROWS_AS(numerics::integrate_real_line(
                        [](double) { return std::numeric_limits<double>::quiet_NaN(); },
                        QuadratureConfig{}),
                    NumericalError);

    QuadratureConfig bad;
    bad.abs_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = QuadratureConfig{};
    bad.max_evaluations = 10;
    CHECK_THROWS_AS(numerics::integrate_real_line([](double) { return 0.0; }, bad), DomainError);
}

TEST_CASE("infinite values never count as converged") {
    const IntegralEstimate est = numerics::integrate_real_line(
        [](double x) { return std::abs(x) > 1e3 ? std::numeric_limits<double>::infinity() : 0.0; },
        QuadratureConfig{});
    CHECK_FALSE(est.converged);
}

TEST_CASE("x^{-1.05} tail: the map weight survives abscissae near zero") {
    // 1/(1+|x|)^{1.05} integrates to 2/0.05 = 40; the tail is resolved only
    // out to |x| ~ 1e300, where sin(t)^2 underflows.
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    const IntegralEstimate est = numerics::integrate_real_line(
        [](double x) { return std::pow(1.0 + std::abs(x), -1.05); }, cfg);
    CHECK(est.converged);
    CHECK(est.value == Approx(40.0).epsilon(1e-7));
}

TEST_CASE("finite differences") {
    auto square = [](double x) { return x * x; };
    auto cube = [](double x) { return x * x * x; };
    CHECK(numerics::finite_difference(square, 3.0, 1, numerics::default_step(1, 3.0)) ==
          Approx(6.0).epsilon(1e-9));
    CHECK(numerics::finite_difference([](double x) { return std::exp(x); }, 0.0, 2,
                                      numerics::default_step(2)) == Approx(1.0).epsilon(1e-6));
    CHECK(numerics::finite_difference(cube, 0.0, 3, numerics::default_step(3)) ==
          Approx(6.0).epsilon(1e-6));
    CHECK(numerics::default_step(1) ==
          Approx(std::cbrt(std::numeric_limits<double>::epsilon())));
    CHECK_THROWS_AS(numerics::finite_difference(square, 0.0, 4, 1e-3), DomainError);
    CHECK_THROWS_AS(numerics::finite_difference(square, 0.0, 1, 0.0), DomainError);
}
