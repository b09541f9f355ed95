#pragma once

#include <vector>

#include "extremo/rng.hpp"
#include "extremo/types.hpp"

namespace extremo {

// Cholesky factor of the covariance of the Gaussian increment process W on the
// grid, rooted at the first enumerated point p0 (so W(p0) == 0 identically).
// Cov[W(pa), W(pb)] = delta(pa - p0) + delta(pb - p0) - delta(pa - pb), taken
// over the N-1 non-root points with a small diagonal jitter before factoring.
//
// Building the factor is the expensive step; it depends only on (grid, params)
// and is immutable afterwards, so one instance can be shared by any number of
// replications and threads.
class IncrementFactor {
public:
    IncrementFactor(const GridSpec& grid, const DependenceParams& params);

    const GridSpec& grid() const { return grid_; }
    const DependenceParams& params() const { return params_; }
    long point_count() const { return n_points_; }

    // One increment field; w has length point_count() and w[0] == 0.
    std::vector<double> draw_increments(RngStream& rng) const;

    // Pieces used by the simulator: draw the full normal vector, then accumulate
    // w for grid points [from, to). Point p > 0 lives in factor row p-1, so a
    // prefix [0, k+1) touches only the leading triangle, which is what makes
    // rejected candidate draws cheap.
    void fill_normals(RngStream& rng, std::vector<double>& z) const;
    void accumulate(const std::vector<double>& z, std::vector<double>& w, long from, long to) const;

    // delta(p_a - p_b) looked up from the precomputed lag table
    double delta_between(long a, long b) const;

private:
    GridSpec grid_;
    DependenceParams params_;
    long n_points_;
    std::vector<double> tri_;       // packed row-major lower triangle, row r at r(r+1)/2
    std::vector<double> delta_tab_; // delta by (squared spatial lag, time lag)
    std::vector<int> coord_i1_, coord_i2_, coord_t_;
};

// Exact draw of the max-stable field with unit Frechet margins, built from one
// extremal function per grid point. Throws std::runtime_error if a site fails
// to converge within the internal candidate cap.
SpaceTimeField simulate_brown_resnick(const IncrementFactor& factor, RngStream& rng);
SpaceTimeField simulate_brown_resnick(const GridSpec& grid, const DependenceParams& params,
                                      RngStream& rng);

// Same algorithm visiting sites in the given order (a permutation of all cell
// indices). The output distribution does not depend on the order; this exists
// so tests can check that.
SpaceTimeField simulate_with_site_order(const IncrementFactor& factor, RngStream& rng,
                                        const std::vector<long>& order);

// Adds independent half-normal measurement noise |N(0, sd^2)| to every cell.
// sd == 0 leaves the field untouched and consumes no randomness.
void add_observational_noise(SpaceTimeField& field, double sd, RngStream& rng);

}  // namespace extremo
