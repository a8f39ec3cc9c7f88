#include "doctest.h"
#include "rso/regression.hpp"
#include "rso/errors.hpp"
#include "rso/rng.hpp"

using namespace rso;

TEST_CASE("fitting data generated from a line recovers it exactly") {
    std::vector<double> x, y;
    for (double v = 0.20; v <= 0.931; v += 0.01) {
        x.push_back(v);
        y.push_back(1.97 * v + 33.02);
    }
    const RegressionModel m = fit_polynomial(x, y, 1);
    CHECK(m.coeffs[0] == doctest::Approx(33.02).epsilon(1e-9));
    CHECK(m.coeffs[1] == doctest::Approx(1.97).epsilon(1e-9));
    CHECK(m.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.residual_sd < 1e-9);
}

TEST_CASE("quadratic round trip") {
    std::vector<double> x, y;
    for (double v = 0.5; v <= 0.931; v += 0.01) {
        x.push_back(v);
        y.push_back(5.90 * v * v - 4.85 * v + 22.96);
    }
    const RegressionModel m = fit_polynomial(x, y, 2);
    CHECK(m.coeffs[0] == doctest::Approx(22.96).epsilon(1e-7));
    CHECK(m.coeffs[1] == doctest::Approx(-4.85).epsilon(1e-7));
    CHECK(m.coeffs[2] == doctest::Approx(5.90).epsilon(1e-7));
    CHECK(m.fit_lo == doctest::Approx(0.5));
}

TEST_CASE("noisy linear data keeps a high r-squared") {
    RngStream rng(7, 0);
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
        const double v = 0.2 + 0.73 * i / 199.0;
        x.push_back(v);
        y.push_back(2.0 * v + 10.0 + 0.01 * (rng.uniform01() - 0.5));
    }
    const RegressionModel m = fit_polynomial(x, y, 1);
    CHECK(m.r_squared > 0.999);
    CHECK(m.residual_sd < 0.01);
}

TEST_CASE("rank-deficient designs are rejected") {
    const std::vector<double> x(10, 0.5);  // a single repeated abscissa
    std::vector<double> y(10, 1.0);
    CHECK_THROWS_AS(fit_polynomial(x, y, 1), SingularFit);
    CHECK_THROWS_AS(fit_polynomial({0.1, 0.2}, {1.0, 2.0}, 2), SingularFit);
}

TEST_CASE("clamped evaluation freezes the curve outside the fit domain") {
    RegressionModel m;
    m.degree = 2;
    m.coeffs = {22.96, -4.85, 5.90};
    m.fit_lo = 0.50;
    m.fit_hi = 0.93;
    CHECK(m.evaluate_clamped(0.30) == doctest::Approx(m.evaluate(0.50)));
    CHECK(m.evaluate_clamped(0.99) == doctest::Approx(m.evaluate(0.93)));
    CHECK(m.evaluate_clamped(0.70) == doctest::Approx(m.evaluate(0.70)));
}

TEST_CASE("horner evaluation matches the polynomial") {
    RegressionModel m;
    m.degree = 2;
    m.coeffs = {0.091, 0.03, 2.28e-5};
    CHECK(m.evaluate(32.5168) ==
          doctest::Approx(2.28e-5 * 32.5168 * 32.5168 + 0.03 * 32.5168 + 0.091));
    CHECK(m.evaluate(0.0) == doctest::Approx(0.091));
}
