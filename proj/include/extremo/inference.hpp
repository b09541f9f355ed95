#pragma once

#include <optional>
#include <vector>

#include "extremo/extremogram.hpp"
#include "extremo/fit.hpp"
#include "extremo/rng.hpp"
#include "extremo/types.hpp"

namespace extremo {

// Overlapping-block layout: cubes of side b_s and depth b_t, origins stepped by
// (e_s, e_s, e_t). Along an axis of length L with block extent b and shift e
// there are floor((L - b)/e) + 1 origins.
struct BlockScheme {
    int b_s = 1;
    int b_t = 1;
    int e_s = 1;
    int e_t = 1;
};

struct BlockOrigin {
    int i1 = 0;
    int i2 = 0;
    int t = 0;
};

long block_count_along(int length, int extent, int shift);
std::vector<BlockOrigin> enumerate_blocks(const GridSpec& grid, const BlockScheme& scheme);
SpaceTimeField extract_block(const SpaceTimeField& field, const BlockOrigin& origin,
                             const BlockScheme& scheme);

struct SubsampleConfig {
    Axis axis = Axis::spatial;
    BlockScheme scheme;
    std::vector<double> spatial_lags;
    std::vector<int> temporal_lags;
    double quantile_level = 0.9;
    WeightsRule weights = WeightsRule::exp2;
    bool bias_correct = false;
    double beta1 = 0.3;
    double level = 0.95;  // confidence level
};

struct ConfidenceRegion {
    Axis axis = Axis::spatial;
    double theta_hat = 0.0;
    double alpha_hat = 0.0;
    double theta_lo = 0.0, theta_hi = 0.0;
    double alpha_lo = 0.0, alpha_hi = 0.0;
    double c = 0.0;         // subsampling quantile of the scaled block deviations
    double tau_full = 0.0;  // convergence rate factor of the full area
    double level = 0.0;
    int blocks_used = 0;
    int blocks_failed = 0;
};

// Convergence rate factor tau for an observation area: side^(1-beta1) on the
// spatial axis, sqrt(depth)^(1-beta1) on the temporal axis.
double tau_rate(Axis axis, int extent, double beta1);

// Subsampling confidence intervals around the full-area fit. Each block is
// re-thresholded at the same quantile level, re-estimated and re-fitted; blocks
// whose fit degenerates are skipped (more than half failing is an error).
ConfidenceRegion subsample_ci(const SpaceTimeField& field, const SubsampleConfig& config);

// Pointwise acceptance bands for "no dependence along the lag axes", built by
// jointly permuting all cell values n_perm times and re-estimating both
// averaged extremograms each time.
struct PermutationEnvelope {
    int n_perm = 0;
    double band = 0.0;
    double threshold = 0.0;
    double quantile_level = 0.0;
    std::vector<double> spatial_lags;
    std::vector<int> temporal_lags;
    std::vector<std::optional<double>> spatial_observed, spatial_lo, spatial_hi;
    std::vector<std::optional<double>> temporal_observed, temporal_lo, temporal_hi;
};

PermutationEnvelope permutation_test(const SpaceTimeField& field, const LagSets& lags,
                                     double quantile_level, int n_perm, double band,
                                     RngStream& rng);

}  // namespace extremo
