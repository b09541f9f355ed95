#include "extremo/study.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "extremo/model.hpp"
#include "extremo/parallel.hpp"
#include "extremo/simulate.hpp"

namespace extremo {

namespace {

const std::vector<double> kReferenceSpatialLags = {
    1.0,      std::sqrt(2.0), 2.0, std::sqrt(5.0),  std::sqrt(8.0),
    3.0,      std::sqrt(10.0),     std::sqrt(13.0), 4.0,
    std::sqrt(17.0)};

std::vector<double> spatial_lags_for(int n) {
    std::vector<double> out;
    for (double v : kReferenceSpatialLags)
        if (lag_realizable(spatial_lag_squared(v), n)) out.push_back(v);
    if (out.empty())
        throw std::invalid_argument("study: grid too small for any reference spatial lag");
    return out;
}

std::vector<int> temporal_lags_for(int t_count) {
    std::vector<int> out;
    for (int u = 1; u <= 10 && u < t_count; ++u) out.push_back(u);
    return out;
}

int round_positive(double x, int lo) {
    int v = static_cast<int>(std::lround(x));
    return v < lo ? lo : v;
}

}  // namespace

StudyConfig desk_preset() {
    StudyConfig cfg;
    cfg.grid_spatial = GridSpec{30, 5};
    cfg.grid_temporal = GridSpec{5, 120};
    cfg.lags_spatial = spatial_lags_for(cfg.grid_spatial.n);
    cfg.lags_temporal = temporal_lags_for(cfg.grid_temporal.t_count);
    cfg.replications = 30;
    cfg.block_spatial = BlockScheme{21, cfg.grid_spatial.t_count, 2, 1};
    cfg.block_temporal = BlockScheme{cfg.grid_temporal.n, 80, 1, 1};
    return cfg;
}

StudyConfig full_preset() {
    StudyConfig cfg;
    cfg.grid_spatial = GridSpec{70, 10};
    cfg.grid_temporal = GridSpec{5, 300};
    cfg.lags_spatial = spatial_lags_for(cfg.grid_spatial.n);
    cfg.lags_temporal = temporal_lags_for(cfg.grid_temporal.t_count);
    cfg.replications = 100;
    cfg.block_spatial = BlockScheme{50, cfg.grid_spatial.t_count, 2, 1};
    cfg.block_temporal = BlockScheme{cfg.grid_temporal.n, 200, 1, 1};
    return cfg;
}

StudyConfig scaled_preset(double r) {
    if (!(r > 0.0) || r > 1.0)
        throw std::invalid_argument("scaled_preset: scale must lie in (0, 1]");
    StudyConfig full = full_preset();
    StudyConfig cfg = full;
    cfg.grid_spatial = GridSpec{round_positive(70 * r, 5), round_positive(10 * r, 2)};
    cfg.grid_temporal = GridSpec{5, round_positive(300 * r, 12)};
    cfg.lags_spatial = spatial_lags_for(cfg.grid_spatial.n);
    cfg.lags_temporal = temporal_lags_for(cfg.grid_temporal.t_count);
    int bs = round_positive(50.0 / 70.0 * cfg.grid_spatial.n, 2);
    int bt = round_positive(200.0 / 300.0 * cfg.grid_temporal.t_count, 2);
    cfg.block_spatial = BlockScheme{std::min(bs, cfg.grid_spatial.n), cfg.grid_spatial.t_count,
                                    2, 1};
    cfg.block_temporal = BlockScheme{cfg.grid_temporal.n, std::min(bt, cfg.grid_temporal.t_count),
                                     1, 1};
    // estimation lags have to fit inside the blocks, or every interval would fail
    cfg.lags_spatial = spatial_lags_for(std::min(cfg.grid_spatial.n, cfg.block_spatial.b_s));
    cfg.lags_temporal = temporal_lags_for(std::min(cfg.grid_temporal.t_count,
                                                   cfg.block_temporal.b_t));
    return cfg;
}

namespace {

void validate_config(const StudyConfig& cfg) {
    cfg.params.validate();
    cfg.grid_spatial.validate();
    cfg.grid_temporal.validate();
    validate_lags(cfg.grid_spatial, LagSets{cfg.lags_spatial, {}});
    validate_lags(cfg.grid_temporal, LagSets{{}, cfg.lags_temporal});
    if (cfg.replications < 1) throw std::invalid_argument("study: replications must be positive");
    if (!(cfg.beta1 > 0.2) || !(cfg.beta1 < 0.5))
        throw std::invalid_argument("study: beta1 must lie in (1/5, 1/2)");
    if (cfg.noise_sd < 0.0) throw std::invalid_argument("study: noise sd must be nonnegative");
}

ParamAgg aggregate(const std::vector<RepResult>& reps, double truth,
                   double RepResult::*member) {
    ParamAgg agg;
    double sum = 0, sq = 0, ab = 0;
    for (const auto& r : reps) {
        if (!r.ok()) continue;
        double est = r.*member;
        sum += est;
        sq += (est - truth) * (est - truth);
        ab += std::abs(est - truth);
        agg.used += 1;
    }
    if (agg.used > 0) {
        agg.mean = sum / agg.used;
        agg.rmse = std::sqrt(sq / agg.used);
        agg.mae = ab / agg.used;
    }
    return agg;
}

double coverage(const std::vector<RepResult>& reps,
                std::optional<ConfidenceRegion> RepResult::*ci, double truth, bool theta) {
    int covered = 0, with_ci = 0;
    for (const auto& r : reps) {
        if (!r.ok() || !(r.*ci)) continue;
        ++with_ci;
        const ConfidenceRegion& region = *(r.*ci);
        double lo = theta ? region.theta_lo : region.alpha_lo;
        double hi = theta ? region.theta_hi : region.alpha_hi;
        if (lo <= truth && truth <= hi) ++covered;
    }
    return with_ci == 0 ? 0.0 : static_cast<double>(covered) / with_ci;
}

}  // namespace

StudySummary run_study(const StudyConfig& cfg) {
    validate_config(cfg);
    auto start = std::chrono::steady_clock::now();

    IncrementFactor factor_sp(cfg.grid_spatial, cfg.params);
    IncrementFactor factor_tm(cfg.grid_temporal, cfg.params);
    LagClassIndex index_sp(cfg.grid_spatial.n, cfg.lags_spatial);

    StudySummary summary;
    summary.config = cfg;
    summary.reps.resize(cfg.replications);

    RngStream base(cfg.seed);

    parallel_for(cfg.replications, [&](long r) {
        RepResult& res = summary.reps[r];
        res.rep = static_cast<int>(r) + 1;
        try {
            auto stream = [&](std::uint64_t purpose) {
                return base.derive(4 * static_cast<std::uint64_t>(r) + purpose);
            };

            RngStream rng_sp = stream(1);
            SpaceTimeField field_sp = simulate_brown_resnick(factor_sp, rng_sp);
            if (cfg.noise_sd > 0.0) {
                RngStream rng_noise = stream(3);
                add_observational_noise(field_sp, cfg.noise_sd, rng_noise);
            }

            RngStream rng_tm = stream(2);
            SpaceTimeField field_tm = simulate_brown_resnick(factor_tm, rng_tm);
            if (cfg.noise_sd > 0.0) {
                RngStream rng_noise = stream(4);
                add_observational_noise(field_tm, cfg.noise_sd, rng_noise);
            }

            double q_sp = threshold_from_quantile(field_sp, cfg.q_spatial);
            BiasSettings bias_sp{cfg.beta1, 0.0};
            auto est_sp = average_spatial_extremogram(
                field_sp, index_sp, q_sp, cfg.q_spatial,
                cfg.bias_correct_spatial ? &bias_sp : nullptr);
            WlseFit fit_sp = fit_axis(est_sp, cfg.weights);
            res.theta1 = fit_sp.theta;
            res.alpha1 = fit_sp.alpha;
            res.chi_raw = est_sp.values;
            res.chi_corrected = est_sp.bias_corrected ? est_sp.corrected : est_sp.values;

            double m_sp = m_of(Axis::spatial, cfg.grid_spatial, cfg.beta1);
            double q_mn = m_sp * m_sp;
            auto est_mn = average_spatial_extremogram(field_sp, index_sp, q_mn,
                                                      std::exp(-1.0 / q_mn), &bias_sp);
            res.chi_mn_raw = est_mn.values;
            res.chi_mn_corrected = est_mn.corrected;

            double q_tm = threshold_from_quantile(field_tm, cfg.q_temporal);
            BiasSettings bias_tm{cfg.beta1, 0.0};
            auto est_tm = average_temporal_extremogram(
                field_tm, cfg.lags_temporal, q_tm, cfg.q_temporal,
                cfg.bias_correct_temporal ? &bias_tm : nullptr);
            WlseFit fit_tm = fit_axis(est_tm, cfg.weights);
            res.theta2 = fit_tm.theta;
            res.alpha2 = fit_tm.alpha;

            if (cfg.with_ci) {
                SubsampleConfig ci_sp;
                ci_sp.axis = Axis::spatial;
                ci_sp.scheme = cfg.block_spatial;
                ci_sp.spatial_lags = cfg.lags_spatial;
                ci_sp.quantile_level = cfg.q_spatial;
                ci_sp.weights = cfg.weights;
                ci_sp.bias_correct = cfg.bias_correct_spatial;
                ci_sp.beta1 = cfg.beta1;
                ci_sp.level = cfg.ci_level;
                try {
                    res.ci_spatial = subsample_ci(field_sp, ci_sp);
                } catch (const std::exception&) {
                    res.ci_spatial.reset();
                }

                SubsampleConfig ci_tm;
                ci_tm.axis = Axis::temporal;
                ci_tm.scheme = cfg.block_temporal;
                ci_tm.temporal_lags = cfg.lags_temporal;
                ci_tm.quantile_level = cfg.q_temporal;
                ci_tm.weights = cfg.weights;
                ci_tm.bias_correct = cfg.bias_correct_temporal;
                ci_tm.beta1 = cfg.beta1;
                ci_tm.level = cfg.ci_level;
                try {
                    res.ci_temporal = subsample_ci(field_tm, ci_tm);
                } catch (const std::exception&) {
                    res.ci_temporal.reset();
                }
            }
        } catch (const std::exception& e) {
            res.error = e.what();
        }
    });

    summary.theta1 = aggregate(summary.reps, cfg.params.theta1, &RepResult::theta1);
    summary.alpha1 = aggregate(summary.reps, cfg.params.alpha1, &RepResult::alpha1);
    summary.theta2 = aggregate(summary.reps, cfg.params.theta2, &RepResult::theta2);
    summary.alpha2 = aggregate(summary.reps, cfg.params.alpha2, &RepResult::alpha2);
    summary.cover_theta1 =
        coverage(summary.reps, &RepResult::ci_spatial, cfg.params.theta1, true);
    summary.cover_alpha1 =
        coverage(summary.reps, &RepResult::ci_spatial, cfg.params.alpha1, false);
    summary.cover_theta2 =
        coverage(summary.reps, &RepResult::ci_temporal, cfg.params.theta2, true);
    summary.cover_alpha2 =
        coverage(summary.reps, &RepResult::ci_temporal, cfg.params.alpha2, false);

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

nlohmann::ordered_json config_to_json(const StudyConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["grid_spatial"] = {{"n", cfg.grid_spatial.n}, {"t_count", cfg.grid_spatial.t_count}};
    doc["grid_temporal"] = {{"n", cfg.grid_temporal.n}, {"t_count", cfg.grid_temporal.t_count}};
    doc["params"] = {{"theta1", cfg.params.theta1},
                     {"alpha1", cfg.params.alpha1},
                     {"theta2", cfg.params.theta2},
                     {"alpha2", cfg.params.alpha2}};
    doc["lags_spatial"] = cfg.lags_spatial;
    doc["lags_temporal"] = cfg.lags_temporal;
    doc["q_spatial"] = cfg.q_spatial;
    doc["q_temporal"] = cfg.q_temporal;
    doc["weights"] = weights_rule_name(cfg.weights);
    doc["beta1"] = cfg.beta1;
    doc["bias_correct_spatial"] = cfg.bias_correct_spatial;
    doc["bias_correct_temporal"] = cfg.bias_correct_temporal;
    doc["noise_sd"] = cfg.noise_sd;
    doc["replications"] = cfg.replications;
    doc["seed"] = cfg.seed;
    doc["with_ci"] = cfg.with_ci;
    doc["block_spatial"] = {{"b_s", cfg.block_spatial.b_s},
                            {"b_t", cfg.block_spatial.b_t},
                            {"e_s", cfg.block_spatial.e_s},
                            {"e_t", cfg.block_spatial.e_t}};
    doc["block_temporal"] = {{"b_s", cfg.block_temporal.b_s},
                             {"b_t", cfg.block_temporal.b_t},
                             {"e_s", cfg.block_temporal.e_s},
                             {"e_t", cfg.block_temporal.e_t}};
    doc["ci_level"] = cfg.ci_level;
    return doc;
}

namespace {

nlohmann::ordered_json agg_to_json(const ParamAgg& agg) {
    return {{"mean", agg.mean}, {"rmse", agg.rmse}, {"mae", agg.mae}, {"used", agg.used}};
}

nlohmann::ordered_json region_brief(const ConfidenceRegion& region) {
    return {{"theta", {region.theta_lo, region.theta_hi}},
            {"alpha", {region.alpha_lo, region.alpha_hi}},
            {"c", region.c},
            {"blocks_used", region.blocks_used},
            {"blocks_failed", region.blocks_failed}};
}

}  // namespace

nlohmann::ordered_json summary_to_json(const StudySummary& summary) {
    nlohmann::ordered_json doc;
    doc["config_echo"] = config_to_json(summary.config);
    doc["per_param"] = {{"theta1", agg_to_json(summary.theta1)},
                         {"alpha1", agg_to_json(summary.alpha1)},
                         {"theta2", agg_to_json(summary.theta2)},
                         {"alpha2", agg_to_json(summary.alpha2)}};
    doc["ci_coverage"] = {{"theta1", summary.cover_theta1},
                          {"alpha1", summary.cover_alpha1},
                          {"theta2", summary.cover_theta2},
                          {"alpha2", summary.cover_alpha2}};
    doc["wall_seconds"] = summary.wall_seconds;
    auto& reps = doc["reps"] = nlohmann::ordered_json::array();
    for (const auto& r : summary.reps) {
        nlohmann::ordered_json row;
        row["rep"] = r.rep;
        if (!r.ok()) {
            row["error"] = r.error;
            reps.push_back(row);
            continue;
        }
        row["theta1"] = r.theta1;
        row["alpha1"] = r.alpha1;
        row["theta2"] = r.theta2;
        row["alpha2"] = r.alpha2;
        if (r.ci_spatial) row["ci_spatial"] = region_brief(*r.ci_spatial);
        if (r.ci_temporal) row["ci_temporal"] = region_brief(*r.ci_temporal);
        reps.push_back(row);
    }
    return doc;
}

}  // namespace extremo
