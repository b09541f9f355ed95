#include "extremo/extremogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extremo {

LagClassIndex::LagClassIndex(int n, const std::vector<double>& spatial_lags) {
    if (n < 1) throw std::invalid_argument("lag index: grid side must be positive");
    lags_ = spatial_lags;
    pairs_.resize(lags_.size());

    for (std::size_t li = 0; li < lags_.size(); ++li) {
        int d2 = spatial_lag_squared(lags_[li]);
        if (d2 <= 0)
            throw std::invalid_argument("lag index: spatial lags must be positive grid distances");
        auto& list = pairs_[li];
        // every signed offset (h1, h2) with h1^2 + h2^2 == d2 contributes the
        // ordered pairs (s, s + h) for all sites s where both ends are in range
        int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(d2)))) ;
        for (int h1 = -r; h1 <= r; ++h1) {
            int rest = d2 - h1 * h1;
            if (rest < 0) continue;
            int h2a = static_cast<int>(std::round(std::sqrt(static_cast<double>(rest))));
            if (h2a * h2a != rest) continue;
            for (int sign : {1, -1}) {
                if (sign < 0 && h2a == 0) continue;  // (h1, 0) and (h1, -0) are the same offset
                int h2 = sign * h2a;
                for (int i1 = std::max(0, -h1); i1 < std::min(n, n - h1); ++i1)
                    for (int i2 = std::max(0, -h2); i2 < std::min(n, n - h2); ++i2)
                        list.emplace_back(i1 * n + i2, (i1 + h1) * n + (i2 + h2));
            }
        }
        if (list.empty())
            throw std::invalid_argument("lag index: no site pairs at spatial lag " +
                                        std::to_string(lags_[li]));
    }
}

double lower_quantile(std::vector<double> sample, double level) {
    if (sample.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(level > 0.0) || !(level <= 1.0))
        throw std::invalid_argument("quantile level must lie in (0, 1]");
    auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(sample.size())));
    if (k < 1) k = 1;
    std::nth_element(sample.begin(), sample.begin() + (k - 1), sample.end());
    return sample[k - 1];
}

double threshold_from_quantile(const SpaceTimeField& field, double level) {
    return lower_quantile(field.values, level);
}

namespace {

// exceedance indicators for one time slice, in site order
void slice_exceedances(const SpaceTimeField& field, int t, double q, std::vector<char>& out) {
    const GridSpec& g = field.grid;
    out.resize(g.site_count());
    for (int s = 0; s < g.site_count(); ++s)
        out[s] = field.values[static_cast<long>(s) * g.t_count + t] > q ? 1 : 0;
}

}  // namespace

std::vector<std::optional<double>> empirical_spatial_extremogram(const SpaceTimeField& field,
                                                                 int t,
                                                                 const LagClassIndex& index,
                                                                 double q) {
    const GridSpec& g = field.grid;
    if (t < 0 || t >= g.t_count)
        throw std::invalid_argument("spatial extremogram: time slice out of range");

    std::vector<char> exceed;
    slice_exceedances(field, t, q, exceed);
    long exceed_count = std::count(exceed.begin(), exceed.end(), char{1});

    std::vector<std::optional<double>> out(index.lag_count());
    if (exceed_count == 0) return out;  // all lags missing in this slice

    double denom = static_cast<double>(exceed_count) / static_cast<double>(g.site_count());
    for (int li = 0; li < index.lag_count(); ++li) {
        const auto& pairs = index.pairs(li);
        long joint = 0;
        for (const auto& [a, b] : pairs) joint += exceed[a] & exceed[b];
        double num = static_cast<double>(joint) / static_cast<double>(pairs.size());
        out[li] = num / denom;
    }
    return out;
}

std::optional<double> empirical_temporal_extremogram(const SpaceTimeField& field, int site, int u,
                                                     double q) {
    const GridSpec& g = field.grid;
    if (site < 0 || site >= g.site_count())
        throw std::invalid_argument("temporal extremogram: site out of range");
    if (u < 1 || u >= g.t_count)
        throw std::invalid_argument("temporal extremogram: lag must satisfy 1 <= u < t_count");

    const double* series = field.values.data() + static_cast<long>(site) * g.t_count;
    int exceed_count = 0;
    for (int t = 0; t < g.t_count; ++t) exceed_count += series[t] > q;
    if (exceed_count == 0) return std::nullopt;

    long joint = 0;
    for (int t = 0; t + u < g.t_count; ++t) joint += (series[t] > q) & (series[t + u] > q);
    double num = static_cast<double>(joint) / static_cast<double>(g.t_count - u);
    double den = static_cast<double>(exceed_count) / static_cast<double>(g.t_count);
    return num / den;
}

double bias_correct(double chi_hat, double m_n, double beta1) {
    if (!(beta1 > 0.2) || !(beta1 < 0.5))
        throw std::invalid_argument("bias_correct: beta1 must lie in (1/5, 1/2)");
    if (beta1 > 1.0 / 3.0) return chi_hat;
    if (!(m_n > 0.0)) throw std::invalid_argument("bias_correct: m_n must be positive");
    return chi_hat - (chi_hat - 2.0) * (chi_hat - 1.0) / (2.0 * m_n * m_n);
}

double m_of(Axis axis, const GridSpec& grid, double beta1) {
    double base = axis == Axis::spatial ? static_cast<double>(grid.n)
                                        : std::sqrt(static_cast<double>(grid.t_count));
    return std::pow(base, beta1);
}

namespace {

struct Accumulator {
    std::vector<double> raw_sum, cor_sum;
    std::vector<int> count;

    explicit Accumulator(std::size_t lags)
        : raw_sum(lags, 0.0), cor_sum(lags, 0.0), count(lags, 0) {}

    void add(std::size_t li, double value, const BiasSettings* bias) {
        raw_sum[li] += value;
        if (bias) cor_sum[li] += bias_correct(value, bias->m_n, bias->beta1);
        count[li] += 1;
    }
};

void finalize(ExtremogramEstimate& est, const Accumulator& acc, const BiasSettings* bias) {
    std::size_t lags = est.lags.size();
    est.values.assign(lags, std::nullopt);
    if (bias) est.corrected.assign(lags, std::nullopt);
    est.contributing.assign(lags, 0);
    for (std::size_t li = 0; li < lags; ++li) {
        if (acc.count[li] == 0)
            throw std::runtime_error("extremogram: no exceedance information at lag " +
                                     std::to_string(est.lags[li]) + " in any slice");
        est.contributing[li] = acc.count[li];
        est.values[li] = acc.raw_sum[li] / acc.count[li];
        if (bias) est.corrected[li] = acc.cor_sum[li] / acc.count[li];
    }
    if (bias) {
        est.bias_corrected = true;
        est.m_n = bias->m_n;
    }
}

BiasSettings resolved(const BiasSettings* bias, Axis axis, const GridSpec& grid) {
    BiasSettings b = *bias;
    if (b.m_n == 0.0) b.m_n = m_of(axis, grid, b.beta1);
    return b;
}

}  // namespace

ExtremogramEstimate average_spatial_extremogram(const SpaceTimeField& field,
                                                const LagClassIndex& index, double q,
                                                double quantile_level,
                                                const BiasSettings* bias) {
    ExtremogramEstimate est;
    est.axis = Axis::spatial;
    est.threshold = q;
    est.quantile_level = quantile_level;
    for (int li = 0; li < index.lag_count(); ++li) {
        est.lags.push_back(index.lag(li));
        est.pair_counts.push_back(static_cast<long>(index.pairs(li).size()));
    }

    BiasSettings local;
    if (bias) {
        local = resolved(bias, Axis::spatial, field.grid);
        bias = &local;
    }

    Accumulator acc(est.lags.size());
    for (int t = 0; t < field.grid.t_count; ++t) {
        auto slice = empirical_spatial_extremogram(field, t, index, q);
        for (std::size_t li = 0; li < slice.size(); ++li)
            if (slice[li]) acc.add(li, *slice[li], bias);
    }
    finalize(est, acc, bias);
    return est;
}

ExtremogramEstimate average_temporal_extremogram(const SpaceTimeField& field,
                                                 const std::vector<int>& lags_u, double q,
                                                 double quantile_level,
                                                 const BiasSettings* bias) {
    ExtremogramEstimate est;
    est.axis = Axis::temporal;
    est.threshold = q;
    est.quantile_level = quantile_level;
    for (int u : lags_u) {
        est.lags.push_back(static_cast<double>(u));
        est.pair_counts.push_back(field.grid.t_count - u);
    }

    BiasSettings local;
    if (bias) {
        local = resolved(bias, Axis::temporal, field.grid);
        bias = &local;
    }

    Accumulator acc(est.lags.size());
    for (int s = 0; s < field.grid.site_count(); ++s) {
        for (std::size_t li = 0; li < lags_u.size(); ++li) {
            auto value = empirical_temporal_extremogram(field, s, lags_u[li], q);
            if (value) acc.add(li, *value, bias);
        }
    }
    finalize(est, acc, bias);
    return est;
}

}  // namespace extremo
