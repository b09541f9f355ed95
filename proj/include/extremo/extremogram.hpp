#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "extremo/types.hpp"

namespace extremo {

// Ordered pairs of grid sites at each requested spatial distance. Built once per
// (grid side, lag set) and reused across time slices, replications and blocks.
class LagClassIndex {
public:
    LagClassIndex(int n, const std::vector<double>& spatial_lags);

    int lag_count() const { return static_cast<int>(lags_.size()); }
    double lag(int i) const { return lags_[i]; }
    const std::vector<std::pair<int, int>>& pairs(int i) const { return pairs_[i]; }

private:
    std::vector<double> lags_;
    std::vector<std::vector<std::pair<int, int>>> pairs_;  // ordered (site, site)
};

// Empirical quantile of all cell values at `level`, using the lower order
// statistic x_(ceil(level * N)).
double threshold_from_quantile(const SpaceTimeField& field, double level);

// Same order-statistic rule on a plain sample.
double lower_quantile(std::vector<double> sample, double level);

// chi-hat at every indexed spatial lag for one time slice: the fraction of
// lag-pairs with both sites above q, normalized by the slice exceedance rate.
// A lag is missing when the slice has no exceedances at all.
std::vector<std::optional<double>> empirical_spatial_extremogram(const SpaceTimeField& field,
                                                                 int t,
                                                                 const LagClassIndex& index,
                                                                 double q);

// chi-hat at time lag u for one site s (flattened spatial index): joint
// exceedances over the T-u aligned pairs, normalized by the site exceedance
// rate over all T steps. Missing when the site never exceeds q.
std::optional<double> empirical_temporal_extremogram(const SpaceTimeField& field, int site, int u,
                                                     double q);

// Pre-asymptotic bias correction. Active for beta1 in (1/5, 1/3]; the identity
// for beta1 in (1/3, 1/2); rejected outside (1/5, 1/2).
double bias_correct(double chi_hat, double m_n, double beta1);

// Effective block-count parameter feeding the correction and the subsampling
// rate: n^beta1 on the spatial axis and sqrt(T)^beta1 on the temporal axis.
double m_of(Axis axis, const GridSpec& grid, double beta1);

struct BiasSettings {
    double beta1 = 0.3;
    double m_n = 0.0;  // filled from m_of when 0
};

// Averaged extremogram along one axis together with everything needed to fit,
// report and diagnose it.
struct ExtremogramEstimate {
    Axis axis = Axis::spatial;
    std::vector<double> lags;
    std::vector<std::optional<double>> values;     // averaged raw chi-hat
    std::vector<std::optional<double>> corrected;  // averaged corrected, empty if not applied
    std::vector<long> pair_counts;    // ordered pairs per lag (one slice / one site)
    std::vector<int> contributing;    // slices or sites entering the average
    double threshold = 0.0;
    double quantile_level = 0.0;
    bool bias_corrected = false;
    double m_n = 0.0;

    // the series a fit should consume: corrected when present, raw otherwise
    const std::vector<std::optional<double>>& fit_values() const {
        return bias_corrected ? corrected : values;
    }
};

// Average of the per-slice spatial extremograms over all time slices. When
// `bias` is given, each slice value is corrected before averaging and both
// series are kept. Throws if some lag is missing in every slice.
ExtremogramEstimate average_spatial_extremogram(const SpaceTimeField& field,
                                                const LagClassIndex& index, double q,
                                                double quantile_level,
                                                const BiasSettings* bias = nullptr);

// Average of the per-site temporal extremograms over all grid sites.
ExtremogramEstimate average_temporal_extremogram(const SpaceTimeField& field,
                                                 const std::vector<int>& lags_u, double q,
                                                 double quantile_level,
                                                 const BiasSettings* bias = nullptr);

}  // namespace extremo
