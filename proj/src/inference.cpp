#include "extremo/inference.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "extremo/parallel.hpp"

namespace extremo {

long block_count_along(int length, int extent, int shift) {
    if (extent < 1 || extent > length)
        throw std::invalid_argument("block extent must lie in [1, axis length]");
    if (shift < 1) throw std::invalid_argument("block shift must be positive");
    return (length - extent) / shift + 1;
}

std::vector<BlockOrigin> enumerate_blocks(const GridSpec& grid, const BlockScheme& scheme) {
    grid.validate();
    long qs = block_count_along(grid.n, scheme.b_s, scheme.e_s);
    long qt = block_count_along(grid.t_count, scheme.b_t, scheme.e_t);

    std::vector<BlockOrigin> out;
    out.reserve(qs * qs * qt);
    for (long a = 0; a < qs; ++a)
        for (long b = 0; b < qs; ++b)
            for (long c = 0; c < qt; ++c)
                out.push_back({static_cast<int>(a * scheme.e_s), static_cast<int>(b * scheme.e_s),
                               static_cast<int>(c * scheme.e_t)});
    return out;
}

SpaceTimeField extract_block(const SpaceTimeField& field, const BlockOrigin& origin,
                             const BlockScheme& scheme) {
    SpaceTimeField block;
    block.grid = GridSpec{scheme.b_s, scheme.b_t};
    block.margins = field.margins;
    block.values.resize(block.grid.cell_count());
    for (int i1 = 0; i1 < scheme.b_s; ++i1)
        for (int i2 = 0; i2 < scheme.b_s; ++i2)
            for (int t = 0; t < scheme.b_t; ++t)
                block.at(i1, i2, t) = field.at(origin.i1 + i1, origin.i2 + i2, origin.t + t);
    return block;
}

double tau_rate(Axis axis, int extent, double beta1) {
    double base = axis == Axis::spatial ? static_cast<double>(extent)
                                        : std::sqrt(static_cast<double>(extent));
    return std::pow(base, 1.0 - beta1);
}

namespace {

// threshold, estimate and fit one observation area along the chosen axis
WlseFit fit_area(const SpaceTimeField& field, const SubsampleConfig& cfg,
                 const LagClassIndex* spatial_index) {
    double q = threshold_from_quantile(field, cfg.quantile_level);
    BiasSettings bias{cfg.beta1, 0.0};
    const BiasSettings* bias_ptr = cfg.bias_correct ? &bias : nullptr;

    ExtremogramEstimate est;
    if (cfg.axis == Axis::spatial) {
        est = average_spatial_extremogram(field, *spatial_index, q, cfg.quantile_level, bias_ptr);
    } else {
        est = average_temporal_extremogram(field, cfg.temporal_lags, q, cfg.quantile_level,
                                           bias_ptr);
    }
    return fit_axis(est, cfg.weights);
}

}  // namespace

ConfidenceRegion subsample_ci(const SpaceTimeField& field, const SubsampleConfig& cfg) {
    if (!(cfg.level > 0.0) || !(cfg.level < 1.0))
        throw std::invalid_argument("subsample_ci: confidence level must lie in (0, 1)");
    if (cfg.axis == Axis::spatial && cfg.scheme.b_t != field.grid.t_count)
        throw std::invalid_argument("subsample_ci: spatial blocks must span the full time depth");
    if (cfg.axis == Axis::temporal && cfg.scheme.b_s != field.grid.n)
        throw std::invalid_argument("subsample_ci: temporal blocks must span the full grid");

    // block estimation reuses one pair index sized to the block, the full fit its own
    std::unique_ptr<LagClassIndex> full_index, block_index;
    if (cfg.axis == Axis::spatial) {
        if (cfg.spatial_lags.empty())
            throw std::invalid_argument("subsample_ci: no spatial lags given");
        full_index = std::make_unique<LagClassIndex>(field.grid.n, cfg.spatial_lags);
        block_index = std::make_unique<LagClassIndex>(cfg.scheme.b_s, cfg.spatial_lags);
        LagSets check{cfg.spatial_lags, {}};
        validate_lags(GridSpec{cfg.scheme.b_s, cfg.scheme.b_t}, check);
    } else {
        if (cfg.temporal_lags.empty())
            throw std::invalid_argument("subsample_ci: no temporal lags given");
        LagSets check{{}, cfg.temporal_lags};
        validate_lags(GridSpec{cfg.scheme.b_s, cfg.scheme.b_t}, check);
    }

    WlseFit full = fit_area(field, cfg, full_index.get());
    double log_theta_hat = std::log(full.theta);

    auto origins = enumerate_blocks(field.grid, cfg.scheme);
    int block_extent = cfg.axis == Axis::spatial ? cfg.scheme.b_s : cfg.scheme.b_t;
    double tau_block = tau_rate(cfg.axis, block_extent, cfg.beta1);

    std::vector<double> deviations;
    int failed = 0;
    for (const auto& origin : origins) {
        SpaceTimeField block = extract_block(field, origin, cfg.scheme);
        try {
            WlseFit bf = fit_area(block, cfg, block_index.get());
            double d_log_theta = std::log(bf.theta) - log_theta_hat;
            double d_alpha = bf.alpha - full.alpha;
            deviations.push_back(tau_block *
                                 std::sqrt(d_log_theta * d_log_theta + d_alpha * d_alpha));
        } catch (const std::exception&) {
            ++failed;
        }
    }
    if (failed * 2 > static_cast<int>(origins.size()))
        throw std::runtime_error("subsample_ci: more than half of the blocks failed to fit");

    double c = lower_quantile(deviations, cfg.level);

    int full_extent = cfg.axis == Axis::spatial ? field.grid.n : field.grid.t_count;
    double tau_full = tau_rate(cfg.axis, full_extent, cfg.beta1);
    double shift = c / tau_full;

    ConfidenceRegion region;
    region.axis = cfg.axis;
    region.theta_hat = full.theta;
    region.alpha_hat = full.alpha;
    region.theta_lo = full.theta * std::exp(-shift);
    region.theta_hi = full.theta * std::exp(shift);
    region.alpha_lo = std::max(full.alpha - shift, 0.0);
    region.alpha_hi = std::min(full.alpha + shift, 2.0);
    region.c = c;
    region.tau_full = tau_full;
    region.level = cfg.level;
    region.blocks_used = static_cast<int>(deviations.size());
    region.blocks_failed = failed;
    return region;
}

namespace {

std::optional<double> order_statistic(std::vector<double> values, double level) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(values.size())));
    if (k < 1) k = 1;
    return values[k - 1];
}

}  // namespace

PermutationEnvelope permutation_test(const SpaceTimeField& field, const LagSets& lags,
                                     double quantile_level, int n_perm, double band,
                                     RngStream& rng) {
    if (!(band > 0.0) || !(band < 1.0))
        throw std::invalid_argument("permutation_test: band must lie in (0, 1)");
    if (n_perm < 2.0 / (1.0 - band))
        throw std::invalid_argument(
            "permutation_test: too few permutations to resolve the requested band");
    validate_lags(field.grid, lags);

    PermutationEnvelope env;
    env.n_perm = n_perm;
    env.band = band;
    env.quantile_level = quantile_level;
    env.spatial_lags = lags.spatial;
    env.temporal_lags = lags.temporal;

    // the permuted field has the same multiset of values, so one threshold serves all
    env.threshold = threshold_from_quantile(field, quantile_level);

    LagClassIndex index(field.grid.n, lags.spatial);
    auto sp_obs = average_spatial_extremogram(field, index, env.threshold, quantile_level);
    auto tm_obs = average_temporal_extremogram(field, lags.temporal, env.threshold,
                                               quantile_level);
    env.spatial_observed = sp_obs.values;
    env.temporal_observed = tm_obs.values;

    std::size_t n_sp = lags.spatial.size(), n_tm = lags.temporal.size();
    std::vector<std::vector<std::optional<double>>> sp_vals(n_perm), tm_vals(n_perm);

    parallel_for(n_perm, [&](long p) {
        RngStream local = rng.derive(static_cast<std::uint64_t>(p) + 1);
        SpaceTimeField shuffled = field;
        auto& v = shuffled.values;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(local.below(i + 1));
            std::swap(v[i], v[j]);
        }
        try {
            auto sp = average_spatial_extremogram(shuffled, index, env.threshold, quantile_level);
            sp_vals[p] = sp.values;
        } catch (const std::exception&) {
            sp_vals[p].assign(n_sp, std::nullopt);
        }
        try {
            auto tm = average_temporal_extremogram(shuffled, lags.temporal, env.threshold,
                                                   quantile_level);
            tm_vals[p] = tm.values;
        } catch (const std::exception&) {
            tm_vals[p].assign(n_tm, std::nullopt);
        }
    });

    double lo_level = 0.5 * (1.0 - band);
    double hi_level = 1.0 - lo_level;
    auto fill = [&](std::size_t lag_count,
                    const std::vector<std::vector<std::optional<double>>>& all,
                    std::vector<std::optional<double>>& lo,
                    std::vector<std::optional<double>>& hi) {
        lo.assign(lag_count, std::nullopt);
        hi.assign(lag_count, std::nullopt);
        for (std::size_t li = 0; li < lag_count; ++li) {
            std::vector<double> col;
            col.reserve(all.size());
            for (const auto& row : all)
                if (row[li]) col.push_back(*row[li]);
            lo[li] = order_statistic(col, lo_level);
            hi[li] = order_statistic(col, hi_level);
        }
    };
    fill(n_sp, sp_vals, env.spatial_lo, env.spatial_hi);
    fill(n_tm, tm_vals, env.temporal_lo, env.temporal_hi);
    return env;
}

}  // namespace extremo
