#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lrd/model.hpp"

using namespace lrd;

namespace {
const QuadratureConfig q;

double log_slope(const std::function<double(double)>& f, double t, double eps = 0.02) {
    return (std::log(f(t * std::exp(eps))) - std::log(f(t * std::exp(-eps)))) / (2.0 * eps);
}
}  // namespace

TEST_CASE("model construction validates indices") {
    CHECK_THROWS_AS(LrdModel::fbm(0.5), std::invalid_argument);
    CHECK_THROWS_AS(LrdModel::fbm(1.0), std::invalid_argument);
    CHECK_THROWS_AS(LrdModel::two_index(0.75, 0.4), std::invalid_argument);
    CHECK_NOTHROW(LrdModel::fbm(0.75));
}

TEST_CASE("model json round trip") {
    LrdModel m = LrdModel::from_json_text(R"({"kind":"fbm","H":0.75})");
    CHECK(m.kind() == ModelKind::FbmClosedForm);
    CHECK(m.hurst() == 0.75);
    LrdModel m2 = LrdModel::from_json_text(R"({"kind":"two_index","H":0.75,"H0":0.6})");
    CHECK(m2.kind() == ModelKind::TwoIndexDensity);
    CHECK(m2.localIndex() == 0.6);
    CHECK_THROWS(LrdModel::from_json_text(R"({"kind":"nope","H":0.75})"));
}

TEST_CASE("eval_c: fbm closed form and indicator") {
    LrdModel m = LrdModel::fbm(0.75);
    CHECK(eval_c(m, -1.0, q) == 0.0);
    CHECK(eval_c(m, 0.0, q) == 0.0);
    // 1/Gamma(0.25)
    CHECK(eval_c(m, 1.0, q) == doctest::Approx(0.2758156628302093).epsilon(1e-12));
}

TEST_CASE("eval_c: two-index Abelian plateau at large t") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    // c(t) Gamma(H-1/2) t^{3/2-H} -> 1 (ell == 1 normalization)
    double prev = 0.0;
    for (double t : {1e2, 1e3, 1e4}) {
        double v = eval_c(m, t, q) * std::tgamma(0.25) * std::pow(t, 0.75);
        CHECK(v == doctest::Approx(1.0).epsilon(0.02));
        if (prev != 0.0) CHECK(std::abs(v - 1.0) < std::abs(prev - 1.0) + 1e-12);
        prev = v;
    }
}

TEST_CASE("eval_g: fbm closed form, zero at origin, two-index vs quadrature oracle") {
    LrdModel m = LrdModel::fbm(0.75);
    CHECK(eval_g(m, 0.0, q) == 0.0);
    CHECK(eval_g(m, 1.0, q) == doctest::Approx(1.1032626513208373).epsilon(1e-12));

    LrdModel m2 = LrdModel::two_index(0.75, 0.6);
    // independent oracle: adaptive quadrature of eval_c with the u^{H0-3/2}
    // endpoint singularity left to tanh-sinh
    double oracle = integrate_adaptive([&](double u) { return eval_c(m2, u, q); }, 0.0, 1.0, q);
    CHECK(eval_g(m2, 1.0, q) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("variogram: fbm closed form and self-similar scaling") {
    LrdModel m = LrdModel::fbm(0.75);
    CHECK(variogram(m, 0.0, q) == 0.0);
    CHECK(variogram(m, 1.0, q) == doctest::Approx(1.0638460810704871).epsilon(1e-12));
    CHECK(variogram(m, 2.0, q) ==
          doctest::Approx(std::pow(2.0, 1.5) * variogram(m, 1.0, q)).epsilon(1e-12));
}

TEST_CASE("variogram: numerical integral matches v(H) when the density is the fbm one") {
    // H0 == H makes the two-index density exactly the fbm measure
    LrdModel m = LrdModel::two_index(0.75, 0.75);
    double vH = fbm_variogram_constant(0.75);
    CHECK(variogram(m, 1.0, q) == doctest::Approx(vH).epsilon(2e-6));
    CHECK(variogram(m, 0.25, q) ==
          doctest::Approx(vH * std::pow(0.25, 1.5)).epsilon(2e-6));
}

TEST_CASE("increment autocovariance: zero lag, symmetry, fbm asymptotics") {
    LrdModel m = LrdModel::fbm(0.75);
    CHECK(increment_autocov(m, 0.0, 1.0, q) == doctest::Approx(variogram(m, 1.0, q)));
    CHECK(increment_autocov(m, -3.0, 1.0, q) ==
          doctest::Approx(increment_autocov(m, 3.0, 1.0, q)).epsilon(1e-13));
    // Lemma 2.1 constant at t=1e3 (oracle: closed-form fbm covariance)
    double t = 1e3;
    double asym = std::pow(t, -0.5) * std::tgamma(0.5) * std::sin(M_PI * 0.25) / M_PI;
    CHECK(increment_autocov(m, t, 1.0, q) / asym == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("increment autocovariance: two-index correlation form agrees with polarization") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    // at a moderate lag (polarization branch) and just past the switch the
    // two routes must agree
    double aPol = increment_autocov(m, 7.9, 1.0, q);
    double aCorr = increment_autocov(m, 8.1, 1.0, q);
    CHECK(aCorr < aPol);
    CHECK(aCorr == doctest::Approx(aPol).epsilon(0.02));  // smooth across the switch
}

TEST_CASE("c is nonincreasing, diverges at 0+, completely monotone spot check") {
    for (const LrdModel& m : {LrdModel::fbm(0.75), LrdModel::two_index(0.75, 0.6)}) {
        double prev = std::numeric_limits<double>::infinity();
        std::vector<double> ts, cs;
        for (int i = 0; i <= 24; ++i) {
            double t = std::pow(10.0, -3.0 + 5.0 * i / 24.0);
            double c = eval_c(m, t, q);
            CHECK(c > 0.0);
            CHECK(c <= prev * (1.0 + 1e-12));
            prev = c;
            ts.push_back(std::log(t));
            cs.push_back(c);
        }
        CHECK(eval_c(m, 1e-6, q) > eval_c(m, 1e-3, q));
        CHECK(eval_c(m, 1e-3, q) > eval_c(m, 1.0, q));
        // second divided differences nonnegative (complete monotonicity)
        for (std::size_t i = 2; i < cs.size(); ++i) {
            double d1 = (cs[i - 1] - cs[i - 2]) / (ts[i - 1] - ts[i - 2]);
            double d2 = (cs[i] - cs[i - 1]) / (ts[i] - ts[i - 1]);
            // c convex in t: divided differences of c vs t increase
            double dd = (d2 - d1);
            CHECK(dd >= -1e-10 * std::abs(cs[i - 1]));
        }
    }
}

TEST_CASE("g is nondecreasing and unbounded") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    double prev = 0.0;
    for (double t : {0.01, 0.1, 1.0, 10.0, 100.0, 1e4}) {
        double g = eval_g(m, t, q);
        CHECK(g >= prev);
        prev = g;
    }
    CHECK(eval_g(m, 1e4, q) > eval_g(m, 1e2, q));
}

TEST_CASE("asymptotic slopes of c (Eqs. 2.3-2.4)") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    auto f = [&](double t) { return eval_c(m, t, q); };
    CHECK(log_slope(f, 1e4) == doctest::Approx(0.75 - 1.5).epsilon(0.013));
    CHECK(log_slope(f, 1e-4) == doctest::Approx(0.6 - 1.5).epsilon(0.017));
}

TEST_CASE("variogram local index (Lemma 2.2)") {
    LrdModel m = LrdModel::two_index(0.75, 0.6);
    auto sig = [&](double t) { return std::sqrt(variogram(m, t, q)); };
    double slope = log_slope(sig, 1e-3, 0.05);
    CHECK(slope == doctest::Approx(0.6).epsilon(0.035));
}
