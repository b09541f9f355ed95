#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "extremo/fit.hpp"
#include "extremo/model.hpp"
#include "extremo/normal.hpp"
#include "extremo/rng.hpp"

using namespace extremo;

namespace {

ExtremogramEstimate exact_estimate(const DependenceParams& params, Axis axis,
                                   const std::vector<double>& lags) {
    ExtremogramEstimate est;
    est.axis = axis;
    est.lags = lags;
    for (double lag : lags) {
        double chi = axis == Axis::spatial ? chi_true(params, lag, 0.0)
                                           : chi_true(params, 0.0, lag);
        est.values.push_back(chi);
        est.pair_counts.push_back(0);
        est.contributing.push_back(1);
    }
    return est;
}

// brute objective for the constrained problem, same weights and points
double objective(const std::vector<FitPoint>& pts, double log_theta, double alpha) {
    double s = 0.0;
    for (const auto& p : pts) {
        double r = p.y - log_theta - alpha * p.x;
        s += p.w * r * r;
    }
    return s;
}

}  // namespace

TEST_CASE("weights rules by name") {
    CHECK(weights_rule_from_name("exp2") == WeightsRule::exp2);
    CHECK(weights_rule_from_name("extremogram") == WeightsRule::extremogram);
    CHECK(weights_rule_name(WeightsRule::exp2) == "exp2");
    CHECK(weights_rule_name(WeightsRule::extremogram) == "extremogram");
    CHECK_THROWS_AS(weights_rule_from_name("uniform"), std::invalid_argument);
}

TEST_CASE("noise free extremogram recovers the parameters exactly") {
    std::vector<double> sp_lags{1.0, 1.4142135623730951, 2.0, 2.23606797749979, 3.0};
    std::vector<double> tm_lags{1, 2, 3, 4, 5};
    for (auto params : {DependenceParams{0.4, 1.5, 0.2, 1.0}, DependenceParams{1.2, 0.7, 0.05, 1.9},
                        DependenceParams{0.01, 2.0, 3.0, 0.3}}) {
        auto sp = fit_axis(exact_estimate(params, Axis::spatial, sp_lags), WeightsRule::exp2);
        CHECK(sp.theta == doctest::Approx(params.theta1).epsilon(1e-10));
        CHECK(sp.alpha == doctest::Approx(params.alpha1).epsilon(1e-10));
        CHECK_FALSE(sp.constrained);

        auto tm = fit_axis(exact_estimate(params, Axis::temporal, tm_lags),
                           WeightsRule::extremogram);
        CHECK(tm.theta == doctest::Approx(params.theta2).epsilon(1e-10));
        CHECK(tm.alpha == doctest::Approx(params.alpha2).epsilon(1e-10));
    }
}

TEST_CASE("fit weights follow the chosen rule") {
    DependenceParams params{0.4, 1.5, 0.2, 1.0};
    std::vector<double> lags{1.0, 1.4142135623730951};
    auto e2 = fit_axis(exact_estimate(params, Axis::spatial, lags), WeightsRule::exp2);
    REQUIRE(e2.points.size() == 2);
    CHECK(e2.points[0].w == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(e2.points[1].w == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    auto ex = fit_axis(exact_estimate(params, Axis::spatial, lags), WeightsRule::extremogram);
    CHECK(ex.points[0].w == doctest::Approx(chi_true(params, 1.0, 0.0)).epsilon(1e-12));

    CHECK(e2.points[0].x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(e2.points[1].x == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("wlse line on hand built points") {
    // equal weights, y = 3 + 2x
    std::vector<FitPoint> pts{{0, 0.0, 3.0, 1.0}, {0, 1.0, 5.0, 1.0}, {0, 2.0, 7.0, 1.0}};
    auto [intercept, slope] = wlse_line(pts);
    CHECK(intercept == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(slope == doctest::Approx(2.0).epsilon(1e-13));

    // a heavily weighted third point drags the line toward itself
    pts[2].y = 10.0;
    pts[2].w = 1e6;
    auto [i2, s2] = wlse_line(pts);
    CHECK(i2 + 2.0 * s2 == doctest::Approx(10.0).epsilon(1e-4));

    CHECK_THROWS_AS(wlse_line({{0, 1.0, 1.0, 1.0}}), std::runtime_error);
    CHECK_THROWS_AS(wlse_line({{0, 1.0, 1.0, 1.0}, {0, 1.0, 2.0, 1.0}}), std::runtime_error);
    CHECK_THROWS_AS(wlse_line({{0, 0.0, 1.0, 1.0}, {0, 1.0, 2.0, -1.0}}), std::invalid_argument);
}

TEST_CASE("slope constraint projects onto alpha equal two") {
    WlseFit fit;
    fit.intercept = -0.5;
    fit.slope = 2.4;
    fit.points = {{0, 0.5, 0.0, 1.0}, {0, 1.1, 0.0, 3.0}};  // p_wx = (0.5 + 3.3)/4 = 0.95
    apply_slope_constraint(fit);
    CHECK(fit.constrained);
    CHECK(fit.alpha == 2.0);
    CHECK(fit.p_wx == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(fit.theta == doctest::Approx(std::exp(-0.5 + 0.95 * 0.4)).epsilon(1e-13));

    WlseFit flat;
    flat.intercept = 0.0;
    flat.slope = -0.1;
    flat.points = fit.points;
    CHECK_THROWS_AS(apply_slope_constraint(flat), std::runtime_error);

    WlseFit inside;
    inside.intercept = -1.0;
    inside.slope = 1.3;
    inside.points = fit.points;
    apply_slope_constraint(inside);
    CHECK_FALSE(inside.constrained);
    CHECK(inside.alpha == 1.3);
    CHECK(inside.theta == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("constrained solution beats any alpha in range on the objective") {
    // fabricate transformed values from a too-steep line plus asymmetric kinks,
    // so the unconstrained slope exceeds 2 and the projection has to act
    RngStream rng(5);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> lags{1.0, 1.4142135623730951, 2.0, 2.8284271247461903, 4.0};
        ExtremogramEstimate est;
        est.axis = Axis::spatial;
        est.lags = lags;
        double theta = 0.2 + 0.6 * rng.uniform01();
        double steep = 2.2 + 0.8 * rng.uniform01();
        for (double lag : lags) {
            double t_val = std::log(theta) + steep * std::log(lag) +
                           0.05 * (rng.uniform01() - 0.5);
            // invert T: chi = 2(1 - Phi(exp(t/2)))
            double chi = 2.0 * (1.0 - std_normal_cdf(std::exp(0.5 * t_val)));
            est.values.push_back(chi);
            est.pair_counts.push_back(0);
            est.contributing.push_back(1);
        }
        auto fit = fit_axis(est, WeightsRule::exp2);
        if (!fit.constrained) continue;  // noise may keep the slope inside
        CHECK(fit.alpha == 2.0);
        double best = objective(fit.points, std::log(fit.theta), fit.alpha);
        for (double alpha = 1e-4; alpha <= 2.0; alpha += 1e-3) {
            // optimal log theta for fixed alpha is the weighted mean of y - alpha x
            double sw = 0, s = 0;
            for (const auto& p : fit.points) {
                sw += p.w;
                s += p.w * (p.y - alpha * p.x);
            }
            CHECK(best <= objective(fit.points, s / sw, alpha) + 1e-10);
        }
    }
}

TEST_CASE("fit drops unusable lags with reasons") {
    ExtremogramEstimate est;
    est.axis = Axis::spatial;
    est.lags = {1.0, 1.4142135623730951, 2.0, 2.23606797749979, 3.0};
    est.values = {0.6, std::nullopt, 1.2, 5e-5, 0.2};
    est.pair_counts = {0, 0, 0, 0, 0};
    est.contributing = {1, 0, 1, 1, 1};

    auto fit = fit_axis(est, WeightsRule::exp2);
    REQUIRE(fit.points.size() == 2);
    CHECK(fit.points[0].lag == 1.0);
    CHECK(fit.points[1].lag == 3.0);
    REQUIRE(fit.dropped.size() == 3);
    CHECK(fit.dropped[0].reason == "no exceedances at this lag");
    CHECK(fit.dropped[1].reason == "estimate at or above 1, transform undefined");
    CHECK(fit.dropped[2].reason == "estimate at or below the 1e-4 floor");
}

TEST_CASE("fit uses the corrected series when present") {
    DependenceParams params{0.4, 1.5, 0.2, 1.0};
    std::vector<double> lags{1.0, 1.4142135623730951, 2.0};
    auto est = exact_estimate(params, Axis::spatial, lags);
    est.bias_corrected = true;
    // corrupt the corrected series on purpose; the fit must follow it
    est.corrected = est.values;
    for (auto& v : est.corrected) v = *v * 0.9;
    auto fit = fit_axis(est, WeightsRule::exp2);
    auto raw_fit = fit_axis(exact_estimate(params, Axis::spatial, lags), WeightsRule::exp2);
    CHECK(fit.theta != raw_fit.theta);
}

TEST_CASE("fit fails cleanly when too few lags survive") {
    ExtremogramEstimate est;
    est.axis = Axis::temporal;
    est.lags = {1.0, 2.0};
    est.values = {0.5, 1.5};
    est.pair_counts = {0, 0};
    est.contributing = {1, 1};
    CHECK_THROWS_AS(fit_axis(est, WeightsRule::exp2), std::runtime_error);
}
