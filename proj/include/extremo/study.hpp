#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "extremo/fit.hpp"
#include "extremo/inference.hpp"
#include "extremo/types.hpp"

namespace extremo {

// Everything one simulation-estimation experiment needs: two observation
// areas (a wide short one driving the spatial fit, a narrow long one driving
// the temporal fit), the generating parameters and the estimation settings.
struct StudyConfig {
    GridSpec grid_spatial{30, 5};
    GridSpec grid_temporal{5, 120};
    DependenceParams params{0.4, 1.5, 0.2, 1.0};
    std::vector<double> lags_spatial;
    std::vector<int> lags_temporal;
    double q_spatial = 0.9;
    double q_temporal = 0.7;
    WeightsRule weights = WeightsRule::exp2;
    double beta1 = 0.3;
    bool bias_correct_spatial = true;
    bool bias_correct_temporal = false;
    double noise_sd = 0.0;
    int replications = 30;
    std::uint64_t seed = 1;
    bool with_ci = true;
    BlockScheme block_spatial{21, 5, 2, 1};
    BlockScheme block_temporal{5, 80, 1, 1};
    double ci_level = 0.95;
};

// Fills grids, lag sets and block schemes at the bundled working scale
// (30x30x5 and 5x5x120, 30 replications).
StudyConfig desk_preset();

// The full-size experiment (70x70x10 and 5x5x300, 100 replications). Roughly
// two orders of magnitude more work and ~20 GB for the spatial factor.
StudyConfig full_preset();

// full_preset with every area dimension scaled by r (block extents follow),
// clamped so lags and blocks stay realizable.
StudyConfig scaled_preset(double r);

struct RepResult {
    int rep = 0;
    double theta1 = 0, alpha1 = 0, theta2 = 0, alpha2 = 0;
    std::optional<ConfidenceRegion> ci_spatial, ci_temporal;
    // averaged spatial extremogram per lag as the fit saw it (quantile threshold)
    std::vector<std::optional<double>> chi_raw, chi_corrected;
    // the same series under the q = m_n^2 threshold rule, the regime the
    // correction formula is calibrated for; drives the bias diagnostic
    std::vector<std::optional<double>> chi_mn_raw, chi_mn_corrected;
    std::string error;  // nonempty when this replication failed

    bool ok() const { return error.empty(); }
};

struct ParamAgg {
    double mean = 0, rmse = 0, mae = 0;
    int used = 0;
};

struct StudySummary {
    StudyConfig config;
    std::vector<RepResult> reps;
    ParamAgg theta1, alpha1, theta2, alpha2;
    // fraction of replications whose interval covers the generating value
    double cover_theta1 = 0, cover_alpha1 = 0, cover_theta2 = 0, cover_alpha2 = 0;
    double wall_seconds = 0;
};

StudySummary run_study(const StudyConfig& config);

nlohmann::ordered_json config_to_json(const StudyConfig& config);
nlohmann::ordered_json summary_to_json(const StudySummary& summary);

}  // namespace extremo
