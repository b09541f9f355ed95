#pragma once

#include <string>
#include <vector>

#include "extremo/extremogram.hpp"
#include "extremo/types.hpp"

namespace extremo {

enum class WeightsRule { exp2, extremogram };

WeightsRule weights_rule_from_name(const std::string& name);
std::string weights_rule_name(WeightsRule rule);

// One usable point of the regression: x = log(lag), y = T(chi), weight w.
struct FitPoint {
    double lag = 0.0;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

struct DroppedLag {
    double lag = 0.0;
    std::string reason;
};

// Result of fitting one axis: theta/alpha after the slope constraint, plus the
// unconstrained line and enough bookkeeping to reproduce the fit.
struct WlseFit {
    Axis axis = Axis::spatial;
    double theta = 0.0;
    double alpha = 0.0;
    bool constrained = false;     // true when the raw slope exceeded 2
    double intercept = 0.0;       // unconstrained line
    double slope = 0.0;
    double p_wx = 0.0;            // weighted mean of x, drives the projection
    std::vector<FitPoint> points;
    std::vector<DroppedLag> dropped;
    double threshold = 0.0;
    double quantile_level = 0.0;
    WeightsRule weights = WeightsRule::exp2;
};

// Weighted least-squares line through the points; returns {intercept, slope}.
// Throws when fewer than two points remain or all x coincide.
std::pair<double, double> wlse_line(const std::vector<FitPoint>& points);

// Maps the unconstrained line to (theta, alpha) honoring alpha <= 2: a slope
// above 2 is projected back by shifting the intercept along the weighted mean
// of x, which is the exact constrained minimizer of the same objective.
void apply_slope_constraint(WlseFit& fit);

// Full pipeline from an averaged extremogram to parameters of one axis.
// Lags whose values are missing, >= 1, or below the floor 1e-4 are dropped
// (recorded with reasons); the transform and regression run on the rest.
WlseFit fit_axis(const ExtremogramEstimate& estimate, WeightsRule weights);

}  // namespace extremo
