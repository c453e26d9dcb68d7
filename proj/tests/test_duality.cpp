#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lrd/duality.hpp"

using namespace lrd;

namespace {
const QuadratureConfig q;
}

TEST_CASE("alpha_hat: fbm closed form") {
    LrdModel m = LrdModel::fbm(0.75);
    CHECK(alpha_hat(m, 1.0, q) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(alpha_hat(m, 4.0, q) == doctest::Approx(0.3535533905932738).epsilon(1e-13));
}

TEST_CASE("alpha_hat: two-index vs double-quadrature oracle") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    for (double y : {0.5, 2.0}) {
        // oracle: c_hat(y) = int_0^inf e^{-yt} c(t) dt with c evaluated by its
        // own quadrature (independent of the Stieltjes-form route)
        double chatOracle = integrate_adaptive_half_line(
            [&](double t) { return std::exp(-y * t) * eval_c(m, t, q); }, 0.0, 1.0 / y, q);
        CHECK(alpha_hat(m, y, q) == doctest::Approx(1.0 / (y * chatOracle)).epsilon(1e-7));
    }
}

TEST_CASE("closed form is mandatory for fbm, unavailable otherwise") {
    CHECK_NOTHROW(ArCoefficient::closed_form(LrdModel::fbm(0.6)));
    CHECK_THROWS_AS(ArCoefficient::closed_form(LrdModel::two_index(0.75, 0.6)),
                    std::invalid_argument);
}

TEST_CASE("eval_a: fbm closed form and power-law homogeneity") {
    LrdModel m = LrdModel::fbm(0.75);
    ArCoefficient ar = ArCoefficient::closed_form(m);
    CHECK(eval_a(ar, 1.0) == doctest::Approx(0.2040122347745657).epsilon(1e-13));
    CHECK(eval_a(ar, 2.0) ==
          doctest::Approx(std::pow(2.0, -1.25) * eval_a(ar, 1.0)).epsilon(1e-13));
}

TEST_CASE("numeric inversion reproduces the fbm closed forms to 1e-5") {
    LrdModel m = LrdModel::fbm(0.75);
    ArCoefficient cf = ArCoefficient::closed_form(m);
    ArCoefficient ni = ArCoefficient::numeric_inversion(m, q);
    for (int i = 0; i <= 24; ++i) {
        double t = std::pow(10.0, -2.0 + 4.0 * i / 24.0);
        CHECK(ni.a(t) == doctest::Approx(cf.a(t)).epsilon(1e-5));
        CHECK(ni.alpha(t) == doctest::Approx(cf.alpha(t)).epsilon(1e-5));
    }
}

TEST_CASE("duality round trip: y c_hat(y) alpha_hat_from_table(y) = 1") {
    for (bool fbm : {true, false}) {
        LrdModel m = fbm ? LrdModel::fbm(0.75) : LrdModel::two_index(0.75, 0.6);
        ArCoefficient ar = ArCoefficient::numeric_inversion(m, q);
        for (double y : {1e-3, 1e-1, 1.0, 1e1, 1e3}) {
            double alphaHatTab = integrate_adaptive_half_line(
                [&](double t) { return std::exp(-y * t) * ar.alpha(t); }, 0.0, 1.0 / y, q);
            double resid = y * c_hat(m, y, q) * alphaHatTab;
            CHECK(resid == doctest::Approx(1.0).epsilon(1e-5));
        }
    }
}

TEST_CASE("a is positive and nonincreasing on the cached grid") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    ArCoefficient ar = ArCoefficient::numeric_inversion(m, q);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 60; ++i) {
        double t = std::pow(10.0, -5.0 + 10.0 * i / 60.0);
        double a = ar.a(t);
        CHECK(a > 0.0);
        CHECK(a <= prev * (1.0 + 1e-10));
        prev = a;
    }
}

TEST_CASE("two-index a approaches the Eq. (4.5) asymptote at the t^{-1/4} rate") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    ArCoefficient ar = ArCoefficient::numeric_inversion(m, q);
    auto ratio = [&](double t) {
        double asym = 0.25 * std::pow(t, -1.25) / std::tgamma(0.75);
        return ar.a(t) / asym;
    };
    double r2 = ratio(1e2), r4 = ratio(1e4);
    CHECK(r2 < r4);
    CHECK(r4 < 1.0);
    CHECK(std::abs(1.0 - r4) < 0.25);
    // fitted approach exponent close to -(H - 1/2) = -1/4
    double e = std::log((1.0 - r2) / (1.0 - r4)) / std::log(1e2);
    CHECK(e == doctest::Approx(0.25).epsilon(0.5));
}

TEST_CASE("gaver-stehfest cross-checks the talbot inversion") {
    for (bool fbm : {true, false}) {
        LrdModel m = fbm ? LrdModel::fbm(0.75) : LrdModel::two_index(0.75, 0.6);
        ArCoefficient ar = ArCoefficient::numeric_inversion(m, q);
        for (double t : {0.1, 1.0, 10.0}) {
            double gs = gaver_stehfest_alpha(m, t, q);
            CHECK(ar.alpha(t) == doctest::Approx(gs).epsilon(1e-3));
        }
    }
}

TEST_CASE("eval_beta: fbm exact 1/t law") {
    LrdModel m = LrdModel::fbm(0.75);
    ArCoefficient ar = ArCoefficient::closed_form(m);
    CHECK(eval_beta(m, ar, 2.0, q) == doctest::Approx(0.1125395395196383).epsilon(1e-13));
    CHECK(eval_beta(m, ar, 1.0, q) ==
          doctest::Approx(2.0 * eval_beta(m, ar, 2.0, q)).epsilon(1e-13));
}

TEST_CASE("eval_beta: quadrature path matches the fbm closed form") {
    LrdModel m = LrdModel::fbm(0.75);
    ArCoefficient ni = ArCoefficient::numeric_inversion(m, q);
    for (double t : {0.5, 2.0, 50.0}) {
        double exact = std::sin(M_PI * 0.25) / (M_PI * t);
        CHECK(eval_beta(m, ni, t, q) == doctest::Approx(exact).epsilon(2e-5));
    }
}

TEST_CASE("eval_beta: two-index ratio rises toward the Eq. (5.2) limit") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    ArCoefficient ar = ArCoefficient::numeric_inversion(m, q);
    double d = 0.25;
    auto ratio = [&](double t) {
        return eval_beta(m, ar, t, q) * M_PI * t / std::sin(M_PI * d);
    };
    double r2 = ratio(1e2), r3 = ratio(1e3), r4 = ratio(1e4);
    CHECK(r2 < r3);
    CHECK(r3 < r4);
    CHECK(r4 < 1.005);
    CHECK(r4 > 0.85);
}
