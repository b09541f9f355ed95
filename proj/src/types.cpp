#include "extremo/types.hpp"

#include <cmath>

namespace extremo {

void DependenceParams::validate() const {
    if (!(theta1 > 0.0) || !(theta2 > 0.0))
        throw std::invalid_argument("dependence parameters: theta1 and theta2 must be positive");
    if (!(alpha1 > 0.0) || alpha1 > 2.0 || !(alpha2 > 0.0) || alpha2 > 2.0)
        throw std::invalid_argument("dependence parameters: alpha1 and alpha2 must lie in (0, 2]");
}

void GridSpec::validate() const {
    if (n < 1 || t_count < 1)
        throw std::invalid_argument("grid: n and t_count must be at least 1");
}

int spatial_lag_squared(double v) {
    if (!(v > 0.0)) return -1;
    double sq = v * v;
    double rounded = std::round(sq);
    // tolerate representation error in values like sqrt(2); reject anything else
    if (std::abs(sq - rounded) > 1e-9 * (1.0 + sq)) return -1;
    return static_cast<int>(rounded);
}

bool lag_realizable(int d2, int n) {
    if (d2 <= 0) return false;
    for (int h1 = 0; h1 * h1 <= d2; ++h1) {
        if (h1 >= n) break;
        int rest = d2 - h1 * h1;
        int h2 = static_cast<int>(std::round(std::sqrt(static_cast<double>(rest))));
        if (h2 < n && h2 * h2 == rest) return true;
    }
    return false;
}

void validate_lags(const GridSpec& grid, const LagSets& lags) {
    grid.validate();
    for (std::size_t i = 0; i < lags.spatial.size(); ++i) {
        double v = lags.spatial[i];
        int d2 = spatial_lag_squared(v);
        if (d2 <= 0)
            throw std::invalid_argument("spatial lag " + std::to_string(v) +
                                        " is not a positive grid distance");
        if (!lag_realizable(d2, grid.n))
            throw std::invalid_argument("spatial lag " + std::to_string(v) +
                                        " is not realizable on a " + std::to_string(grid.n) +
                                        "x" + std::to_string(grid.n) + " grid");
        if (i > 0 && !(lags.spatial[i] > lags.spatial[i - 1]))
            throw std::invalid_argument("spatial lags must be strictly increasing");
    }
    for (std::size_t i = 0; i < lags.temporal.size(); ++i) {
        int u = lags.temporal[i];
        if (u < 1 || u >= grid.t_count)
            throw std::invalid_argument("temporal lag " + std::to_string(u) +
                                        " does not fit an observation window of length " +
                                        std::to_string(grid.t_count));
        if (i > 0 && lags.temporal[i] <= lags.temporal[i - 1])
            throw std::invalid_argument("temporal lags must be strictly increasing");
    }
}

std::string axis_name(Axis axis) {
    return axis == Axis::spatial ? "spatial" : "temporal";
}

}  // namespace extremo
