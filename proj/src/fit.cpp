#include "extremo/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "extremo/model.hpp"

namespace extremo {

namespace {

constexpr double kChiFloor = 1e-4;

}  // namespace

WeightsRule weights_rule_from_name(const std::string& name) {
    if (name == "exp2") return WeightsRule::exp2;
    if (name == "extremogram") return WeightsRule::extremogram;
    throw std::invalid_argument("unknown weights rule '" + name +
                                "' (expected exp2 or extremogram)");
}

std::string weights_rule_name(WeightsRule rule) {
    return rule == WeightsRule::exp2 ? "exp2" : "extremogram";
}

std::pair<double, double> wlse_line(const std::vector<FitPoint>& points) {
    if (points.size() < 2)
        throw std::runtime_error("wlse: at least two usable lags are required");

    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        if (!(p.w > 0.0)) throw std::invalid_argument("wlse: weights must be positive");
        sw += p.w;
        sx += p.w * p.x;
        sy += p.w * p.y;
        sxx += p.w * p.x * p.x;
        sxy += p.w * p.x * p.y;
    }
    double det = sw * sxx - sx * sx;
    // det is sw^2 * weighted variance of x; it vanishes iff all x coincide
    if (!(det > 1e-12 * sw * (sxx + 1.0)))
        throw std::runtime_error("wlse: design is singular (all lags coincide on log scale)");

    double slope = (sw * sxy - sx * sy) / det;
    double intercept = (sy - slope * sx) / sw;
    return {intercept, slope};
}

void apply_slope_constraint(WlseFit& fit) {
    if (!(fit.slope > 0.0))
        throw std::runtime_error(
            "fit: estimated slope is not positive; the extremogram carries no usable decay");

    double sw = 0, sx = 0;
    for (const auto& p : fit.points) {
        sw += p.w;
        sx += p.w * p.x;
    }
    fit.p_wx = sx / sw;

    if (fit.slope <= 2.0) {
        fit.constrained = false;
        fit.alpha = fit.slope;
        fit.theta = std::exp(fit.intercept);
    } else {
        fit.constrained = true;
        fit.alpha = 2.0;
        fit.theta = std::exp(fit.intercept + fit.p_wx * (fit.slope - 2.0));
    }
}

WlseFit fit_axis(const ExtremogramEstimate& estimate, WeightsRule weights) {
    WlseFit fit;
    fit.axis = estimate.axis;
    fit.threshold = estimate.threshold;
    fit.quantile_level = estimate.quantile_level;
    fit.weights = weights;

    const auto& values = estimate.fit_values();
    for (std::size_t li = 0; li < estimate.lags.size(); ++li) {
        double lag = estimate.lags[li];
        if (!values[li]) {
            fit.dropped.push_back({lag, "no exceedances at this lag"});
            continue;
        }
        double chi = *values[li];
        if (chi >= 1.0) {
            fit.dropped.push_back({lag, "estimate at or above 1, transform undefined"});
            continue;
        }
        if (chi <= kChiFloor) {
            fit.dropped.push_back({lag, "estimate at or below the 1e-4 floor"});
            continue;
        }
        FitPoint p;
        p.lag = lag;
        p.x = std::log(lag);
        p.y = transform_T(chi);
        p.w = weights == WeightsRule::exp2 ? std::exp(-lag * lag) : chi;
        fit.points.push_back(p);
    }

    auto [intercept, slope] = wlse_line(fit.points);
    fit.intercept = intercept;
    fit.slope = slope;
    apply_slope_constraint(fit);
    return fit;
}

}  // namespace extremo
