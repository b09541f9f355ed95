#include "extremo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace extremo {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& token, const std::string& context) {
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw std::runtime_error(context + ": cannot parse '" + token + "' as a number");
    return value;
}

long parse_index(const std::string& token, const std::string& context) {
    long value = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || value < 1)
        throw std::runtime_error(context + ": cannot parse '" + token + "' as a 1-based index");
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : "nan";
}

}  // namespace

SpaceTimeField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "i1,i2,t,value")
        throw std::runtime_error(path + ": expected header 'i1,i2,t,value', got '" + line + "'");

    struct Row {
        long i1, i2, t;
        double value;
    };
    std::vector<Row> rows;
    long max_i1 = 0, max_i2 = 0, max_t = 0;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tokens = split_csv_line(line);
        std::string where = path + ":" + std::to_string(line_no);
        if (tokens.size() != 4) throw std::runtime_error(where + ": expected 4 columns");
        Row r{parse_index(tokens[0], where), parse_index(tokens[1], where),
              parse_index(tokens[2], where), parse_double(tokens[3], where)};
        max_i1 = std::max(max_i1, r.i1);
        max_i2 = std::max(max_i2, r.i2);
        max_t = std::max(max_t, r.t);
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    if (max_i1 != max_i2)
        throw std::runtime_error(path + ": spatial index ranges differ; the grid must be square");

    GridSpec grid{static_cast<int>(max_i1), static_cast<int>(max_t)};
    if (static_cast<long>(rows.size()) != grid.cell_count())
        throw std::runtime_error(path + ": got " + std::to_string(rows.size()) + " rows for a " +
                                 std::to_string(grid.n) + "x" + std::to_string(grid.n) + "x" +
                                 std::to_string(grid.t_count) + " grid");

    SpaceTimeField field;
    field.grid = grid;
    field.margins = MarginTag::raw;
    field.values.assign(grid.cell_count(), 0.0);
    std::vector<char> seen(grid.cell_count(), 0);
    for (const auto& r : rows) {
        long idx = grid.index(static_cast<int>(r.i1 - 1), static_cast<int>(r.i2 - 1),
                              static_cast<int>(r.t - 1));
        if (seen[idx])
            throw std::runtime_error(path + ": duplicate cell (" + std::to_string(r.i1) + "," +
                                     std::to_string(r.i2) + "," + std::to_string(r.t) + ")");
        seen[idx] = 1;
        field.values[idx] = r.value;
    }
    return field;
}

void write_field_csv(const SpaceTimeField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "i1,i2,t,value\n";
    const GridSpec& g = field.grid;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int t = 0; t < g.t_count; ++t)
                out << (i1 + 1) << ',' << (i2 + 1) << ',' << (t + 1) << ','
                    << format_double(field.at(i1, i2, t)) << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_estimates_csv(const std::vector<ExtremogramEstimate>& estimates,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "axis,lag,value,corrected_value,slices,threshold,pairs,quantile_level\n";
    for (const auto& est : estimates) {
        for (std::size_t li = 0; li < est.lags.size(); ++li) {
            out << axis_name(est.axis) << ',' << format_double(est.lags[li]) << ','
                << opt_str(est.values[li]) << ','
                << (est.bias_corrected ? opt_str(est.corrected[li]) : std::string("nan")) << ','
                << est.contributing[li] << ',' << format_double(est.threshold) << ','
                << est.pair_counts[li] << ',' << format_double(est.quantile_level)
                << '\n';
        }
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_envelope_csv(const PermutationEnvelope& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "axis,lag,observed,lower,upper\n";
    for (std::size_t li = 0; li < env.spatial_lags.size(); ++li)
        out << "spatial," << format_double(env.spatial_lags[li]) << ','
            << opt_str(env.spatial_observed[li]) << ',' << opt_str(env.spatial_lo[li]) << ','
            << opt_str(env.spatial_hi[li]) << '\n';
    for (std::size_t li = 0; li < env.temporal_lags.size(); ++li)
        out << "temporal," << env.temporal_lags[li] << ',' << opt_str(env.temporal_observed[li])
            << ',' << opt_str(env.temporal_lo[li]) << ',' << opt_str(env.temporal_hi[li]) << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

nlohmann::ordered_json fit_to_json(const WlseFit& fit) {
    nlohmann::ordered_json doc;
    doc["axis"] = axis_name(fit.axis);
    doc["theta"] = fit.theta;
    doc["alpha"] = fit.alpha;
    doc["constrained"] = fit.constrained;
    doc["unconstrained_alpha"] = fit.slope;
    doc["intercept"] = fit.intercept;
    doc["p_wx"] = fit.p_wx;
    doc["threshold"] = fit.threshold;
    doc["quantile_level"] = fit.quantile_level;
    doc["weights_rule"] = weights_rule_name(fit.weights);
    auto& used = doc["lags_used"] = nlohmann::ordered_json::array();
    for (const auto& p : fit.points) {
        used.push_back({{"lag", p.lag}, {"x", p.x}, {"y", p.y}, {"w", p.w}});
    }
    auto& dropped = doc["dropped_lags"] = nlohmann::ordered_json::array();
    for (const auto& d : fit.dropped) {
        dropped.push_back({{"lag", d.lag}, {"reason", d.reason}});
    }
    return doc;
}

nlohmann::ordered_json region_to_json(const ConfidenceRegion& region) {
    nlohmann::ordered_json doc;
    doc["axis"] = axis_name(region.axis);
    doc["level"] = region.level;
    doc["theta_hat"] = region.theta_hat;
    doc["theta_interval"] = {region.theta_lo, region.theta_hi};
    doc["alpha_hat"] = region.alpha_hat;
    doc["alpha_interval"] = {region.alpha_lo, region.alpha_hi};
    doc["c"] = region.c;
    doc["tau_full"] = region.tau_full;
    doc["blocks_used"] = region.blocks_used;
    doc["blocks_failed"] = region.blocks_failed;
    return doc;
}

void write_json(const nlohmann::ordered_json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

SpaceTimeField frechet_transform(const SpaceTimeField& field) {
    const GridSpec& g = field.grid;
    if (g.t_count < 2)
        throw std::invalid_argument("frechet_transform: at least two time steps are required");

    SpaceTimeField out;
    out.grid = g;
    out.margins = MarginTag::frechet;
    out.values.resize(field.values.size());

    int T = g.t_count;
    std::vector<int> order(T);
    std::vector<double> rank(T);
    for (int s = 0; s < g.site_count(); ++s) {
        const double* series = field.values.data() + static_cast<long>(s) * T;
        for (int t = 0; t < T; ++t) order[t] = t;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return series[a] < series[b]; });
        if (series[order.front()] == series[order.back()])
            throw std::runtime_error("frechet_transform: constant series at site " +
                                     std::to_string(s + 1));
        // average ranks across ties, 1-based
        for (int t = 0; t < T;) {
            int run = t;
            while (run + 1 < T && series[order[run + 1]] == series[order[t]]) ++run;
            double avg = 0.5 * (t + run) + 1.0;
            for (int i = t; i <= run; ++i) rank[order[i]] = avg;
            t = run + 1;
        }
        double* dest = out.values.data() + static_cast<long>(s) * T;
        for (int t = 0; t < T; ++t) dest[t] = -1.0 / std::log(rank[t] / (T + 1.0));
    }
    return out;
}

}  // namespace extremo
