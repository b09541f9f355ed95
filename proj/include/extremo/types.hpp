#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace extremo {

// Parameters of the dependence function
//   delta(v, u) = 2*theta1*v^alpha1 + 2*theta2*u^alpha2
// where v is a spatial distance and u a time lag.
struct DependenceParams {
    double theta1 = 1.0;
    double alpha1 = 1.0;
    double theta2 = 1.0;
    double alpha2 = 1.0;

    void validate() const;
};

// Square n x n spatial grid with unit spacing, observed at t_count consecutive
// unit-spaced time steps. Cells are stored row-major with the time index fastest:
// flat = (i1*n + i2)*t_count + t, all indices 0-based internally.
struct GridSpec {
    int n = 1;
    int t_count = 1;

    void validate() const;

    int site_count() const { return n * n; }
    long cell_count() const { return static_cast<long>(n) * n * t_count; }

    long index(int i1, int i2, int t) const {
        return (static_cast<long>(i1) * n + i2) * t_count + t;
    }
};

enum class MarginTag { raw, frechet };

// One realization of a space-time field on a grid.
struct SpaceTimeField {
    GridSpec grid;
    std::vector<double> values;  // indexed by grid.index(i1, i2, t)
    MarginTag margins = MarginTag::raw;

    double at(int i1, int i2, int t) const { return values[grid.index(i1, i2, t)]; }
    double& at(int i1, int i2, int t) { return values[grid.index(i1, i2, t)]; }
};

enum class Axis { spatial, temporal };

// Lags at which dependence is estimated. Spatial lags must be distances realized
// between grid points (their squares are integers); temporal lags are whole steps.
struct LagSets {
    std::vector<double> spatial;
    std::vector<int> temporal;
};

// Checks that every spatial lag is realizable on the grid and every temporal lag
// fits within the observation window. Throws std::invalid_argument otherwise.
void validate_lags(const GridSpec& grid, const LagSets& lags);

// Squared-integer representation of a spatial lag, or -1 if v^2 is not close to
// an integer expressible as a difference of grid points.
int spatial_lag_squared(double v);

// True when some pair of sites on an n x n grid is exactly sqrt(d2) apart.
bool lag_realizable(int d2, int n);

std::string axis_name(Axis axis);

}  // namespace extremo
