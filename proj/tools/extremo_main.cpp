#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "extremo/io.hpp"
#include "extremo/model.hpp"
#include "extremo/simulate.hpp"
#include "extremo/study.hpp"

namespace {

using namespace extremo;

Axis parse_axis(const std::string& name) {
    if (name == "spatial") return Axis::spatial;
    if (name == "temporal") return Axis::temporal;
    throw CLI::ValidationError("--axis", "expected 'spatial' or 'temporal'");
}

std::vector<double> default_spatial_lags(int n) {
    static const double reference[] = {1.0, 1.4142135623730951, 2.0, 2.23606797749979,
                                       2.8284271247461903, 3.0, 3.1622776601683795,
                                       3.605551275463989, 4.0, 4.123105625617661};
    std::vector<double> out;
    for (double v : reference)
        if (lag_realizable(spatial_lag_squared(v), n)) out.push_back(v);
    return out;
}

std::vector<int> default_temporal_lags(int t_count) {
    std::vector<int> out;
    for (int u = 1; u <= 10 && u < t_count; ++u) out.push_back(u);
    return out;
}

struct FieldOptions {
    std::string input;
    bool to_frechet = false;
};

void add_field_options(CLI::App* cmd, FieldOptions& opts) {
    cmd->add_option("--input", opts.input, "field CSV (header i1,i2,t,value)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_flag("--frechet", opts.to_frechet,
                  "rank-transform each site's series to standard Frechet margins first");
}

SpaceTimeField load_field(const FieldOptions& opts) {
    SpaceTimeField field = read_field_csv(opts.input);
    if (opts.to_frechet) field = frechet_transform(field);
    return field;
}

int cmd_simulate(int n, int t_count, const DependenceParams& params, std::uint64_t seed,
                 double noise_sd, const std::string& out) {
    GridSpec grid{n, t_count};
    RngStream rng(seed);
    RngStream sim_rng = rng.derive(1);
    SpaceTimeField field = simulate_brown_resnick(grid, params, sim_rng);
    if (noise_sd > 0.0) {
        RngStream noise_rng = rng.derive(2);
        add_observational_noise(field, noise_sd, noise_rng);
    }
    write_field_csv(field, out);
    std::cout << "wrote " << grid.n << "x" << grid.n << "x" << grid.t_count << " field to " << out
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "simulation and semiparametric dependence estimation for max-stable "
        "space-time fields on regular grids"};
    app.require_subcommand(1);

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "draw one field and write it as CSV");
    int sim_n = 10, sim_t = 5;
    DependenceParams sim_params;
    std::uint64_t sim_seed = 0;
    double sim_noise = 0.0;
    std::string sim_out;
    sim->add_option("--n", sim_n, "grid side length")->required();
    sim->add_option("--t", sim_t, "number of time steps")->required();
    sim->add_option("--theta1", sim_params.theta1, "spatial scale")->required();
    sim->add_option("--alpha1", sim_params.alpha1, "spatial exponent")->required();
    sim->add_option("--theta2", sim_params.theta2, "temporal scale")->required();
    sim->add_option("--alpha2", sim_params.alpha2, "temporal exponent")->required();
    sim->add_option("--seed", sim_seed, "random seed")->required();
    sim->add_option("--noise-sd", sim_noise, "half-normal measurement noise sd (0 = none)");
    sim->add_option("--out", sim_out, "output CSV path")->required();

    // ---- extremogram -------------------------------------------------------
    auto* ext = app.add_subcommand("extremogram",
                                   "averaged empirical extremograms along both axes");
    FieldOptions ext_field;
    add_field_options(ext, ext_field);
    std::string ext_axis = "both", ext_rule = "quantile";
    double ext_q = 0.9, ext_qt = -1.0, ext_beta1 = 0.3;
    bool ext_correct = false;
    std::vector<double> ext_lags_sp;
    std::vector<int> ext_lags_tm;
    std::string ext_out;
    ext->add_option("--axis", ext_axis, "spatial, temporal or both (default both)");
    ext->add_option("--threshold-rule", ext_rule,
                    "quantile (default): empirical quantile of the field; "
                    "mn: fixed q = m_n^2 with m_n from --beta1");
    ext->add_option("--quantile", ext_q, "threshold quantile level (default 0.9)");
    ext->add_option("--temporal-quantile", ext_qt,
                    "separate quantile level for the temporal axis");
    ext->add_flag("--bias-correct", ext_correct, "apply the pre-asymptotic bias correction");
    ext->add_option("--beta1", ext_beta1, "rate exponent for the correction (default 0.3)");
    ext->add_option("--lags-spatial", ext_lags_sp, "spatial lags (default: grid distances up to sqrt(17))")
        ->delimiter(',');
    ext->add_option("--lags-temporal", ext_lags_tm, "temporal lags (default: 1..10)")
        ->delimiter(',');
    ext->add_option("--out", ext_out, "output CSV path")->required();

    // ---- fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "weighted least-squares parameter estimates");
    std::string fit_input, fit_axis_name = "both", fit_weights = "exp2", fit_out;
    bool fit_frechet = false, fit_oracle = false, fit_correct = false;
    double fit_q = 0.9, fit_qt = -1.0, fit_beta1 = 0.3;
    DependenceParams fit_params;
    std::vector<double> fit_lags_sp;
    std::vector<int> fit_lags_tm;
    fit->add_option("--input", fit_input, "field CSV")->check(CLI::ExistingFile);
    fit->add_flag("--frechet", fit_frechet, "rank-transform margins first");
    fit->add_flag("--oracle", fit_oracle,
                  "skip data entirely: evaluate the model extremogram at the lag set and "
                  "push it through the same transform and regression");
    fit->add_option("--theta1", fit_params.theta1, "oracle spatial scale");
    fit->add_option("--alpha1", fit_params.alpha1, "oracle spatial exponent");
    fit->add_option("--theta2", fit_params.theta2, "oracle temporal scale");
    fit->add_option("--alpha2", fit_params.alpha2, "oracle temporal exponent");
    fit->add_option("--axis", fit_axis_name, "spatial, temporal or both (default both)");
    fit->add_option("--quantile", fit_q, "threshold quantile level (default 0.9)");
    fit->add_option("--temporal-quantile", fit_qt, "separate temporal quantile level");
    fit->add_option("--weights", fit_weights, "exp2 or extremogram (default exp2)");
    fit->add_flag("--bias-correct", fit_correct, "apply the bias correction before fitting");
    fit->add_option("--beta1", fit_beta1, "rate exponent (default 0.3)");
    fit->add_option("--lags-spatial", fit_lags_sp, "spatial lags")->delimiter(',');
    fit->add_option("--lags-temporal", fit_lags_tm, "temporal lags")->delimiter(',');
    fit->add_option("--out", fit_out, "output JSON path")->required();

    // ---- ci ----------------------------------------------------------------
    auto* ci = app.add_subcommand("ci", "subsampling confidence intervals for one axis");
    FieldOptions ci_field;
    add_field_options(ci, ci_field);
    std::string ci_axis_name, ci_weights = "exp2", ci_out;
    double ci_q = 0.9, ci_beta1 = 0.3, ci_level = 0.95;
    bool ci_correct = false;
    int ci_bs = 0, ci_bt = 0, ci_es = 1, ci_et = 1;
    std::vector<double> ci_lags_sp;
    std::vector<int> ci_lags_tm;
    ci->add_option("--axis", ci_axis_name, "spatial or temporal")->required();
    ci->add_option("--quantile", ci_q, "threshold quantile level (default 0.9)");
    ci->add_option("--weights", ci_weights, "exp2 or extremogram (default exp2)");
    ci->add_flag("--bias-correct", ci_correct, "apply the bias correction in every fit");
    ci->add_option("--beta1", ci_beta1, "rate exponent (default 0.3)");
    ci->add_option("--level", ci_level, "confidence level (default 0.95)");
    ci->add_option("--bs", ci_bs, "block side (spatial axis; defaults to the full side)");
    ci->add_option("--bt", ci_bt, "block depth (temporal axis; defaults to the full depth)");
    ci->add_option("--es", ci_es, "spatial block shift (default 1)");
    ci->add_option("--et", ci_et, "temporal block shift (default 1)");
    ci->add_option("--lags-spatial", ci_lags_sp, "spatial lags")->delimiter(',');
    ci->add_option("--lags-temporal", ci_lags_tm, "temporal lags")->delimiter(',');
    ci->add_option("--out", ci_out, "output JSON path")->required();

    // ---- permtest ----------------------------------------------------------
    auto* pt = app.add_subcommand("permtest",
                                  "permutation acceptance bands for the averaged extremograms");
    FieldOptions pt_field;
    add_field_options(pt, pt_field);
    double pt_q = 0.9, pt_band = 0.95;
    int pt_n = 1000;
    std::uint64_t pt_seed = 0;
    std::vector<double> pt_lags_sp;
    std::vector<int> pt_lags_tm;
    std::string pt_out;
    pt->add_option("--quantile", pt_q, "threshold quantile level (default 0.9)");
    pt->add_option("--n-perm", pt_n, "number of permutations (default 1000)");
    pt->add_option("--band", pt_band, "pointwise band level (default 0.95)");
    pt->add_option("--seed", pt_seed, "random seed")->required();
    pt->add_option("--lags-spatial", pt_lags_sp, "spatial lags")->delimiter(',');
    pt->add_option("--lags-temporal", pt_lags_tm, "temporal lags")->delimiter(',');
    pt->add_option("--out", pt_out, "output CSV path")->required();

    // ---- study -------------------------------------------------------------
    auto* st = app.add_subcommand("study",
                                  "simulation study: simulate, estimate and summarize");
    std::string st_preset = "desk", st_weights, st_out;
    double st_scale = 0.0, st_noise = -1.0, st_beta1 = -1.0, st_qsp = -1.0, st_qtm = -1.0;
    double st_ci_level = -1.0;
    int st_reps = 0;
    std::uint64_t st_seed = 0;
    bool st_no_ci = false;
    st->add_option("--preset", st_preset, "desk (default) or full");
    st->add_option("--scale", st_scale, "shrink the full-scale areas by this factor");
    st->add_option("--reps", st_reps, "replications (overrides the preset)");
    st->add_option("--seed", st_seed, "random seed")->required();
    st->add_option("--noise-sd", st_noise, "half-normal measurement noise sd");
    st->add_option("--beta1", st_beta1, "rate exponent");
    st->add_option("--q-spatial", st_qsp, "spatial threshold quantile");
    st->add_option("--q-temporal", st_qtm, "temporal threshold quantile");
    st->add_option("--weights", st_weights, "exp2 or extremogram");
    st->add_option("--ci-level", st_ci_level, "confidence level for the interval sweep");
    st->add_flag("--no-ci", st_no_ci, "skip the subsampling intervals");
    st->add_option("--out", st_out, "output JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_n, sim_t, sim_params, sim_seed, sim_noise, sim_out);

        if (ext->parsed()) {
            SpaceTimeField field = load_field(ext_field);
            if (ext_lags_sp.empty()) ext_lags_sp = default_spatial_lags(field.grid.n);
            if (ext_lags_tm.empty()) ext_lags_tm = default_temporal_lags(field.grid.t_count);
            if (ext_qt < 0.0) ext_qt = ext_q;
            if (ext_rule != "quantile" && ext_rule != "mn")
                throw std::invalid_argument("--threshold-rule must be quantile or mn");
            BiasSettings bias{ext_beta1, 0.0};
            auto pick_threshold = [&](Axis axis, double level) {
                if (ext_rule == "quantile")
                    return std::pair{threshold_from_quantile(field, level), level};
                double m = m_of(axis, field.grid, ext_beta1);
                // the fixed theory threshold; record the Frechet level it sits at
                return std::pair{m * m, std::exp(-1.0 / (m * m))};
            };
            std::vector<ExtremogramEstimate> estimates;
            if (ext_axis == "spatial" || ext_axis == "both") {
                LagClassIndex index(field.grid.n, ext_lags_sp);
                auto [q, level] = pick_threshold(Axis::spatial, ext_q);
                estimates.push_back(average_spatial_extremogram(field, index, q, level,
                                                                ext_correct ? &bias : nullptr));
            }
            if (ext_axis == "temporal" || ext_axis == "both") {
                auto [q, level] = pick_threshold(Axis::temporal, ext_qt);
                estimates.push_back(average_temporal_extremogram(field, ext_lags_tm, q, level,
                                                                 ext_correct ? &bias : nullptr));
            }
            if (estimates.empty())
                throw std::invalid_argument("--axis must be spatial, temporal or both");
            write_estimates_csv(estimates, ext_out);
            std::cout << "wrote extremogram estimates to " << ext_out << "\n";
            return 0;
        }

        if (fit->parsed()) {
            nlohmann::ordered_json doc;
            WeightsRule rule = weights_rule_from_name(fit_weights);
            if (fit_oracle) {
                fit_params.validate();
                if (fit_lags_sp.empty()) fit_lags_sp = default_spatial_lags(1000);
                if (fit_lags_tm.empty()) fit_lags_tm = default_temporal_lags(1000);
                auto oracle_fit = [&](Axis axis) {
                    ExtremogramEstimate est;
                    est.axis = axis;
                    if (axis == Axis::spatial)
                        for (double v : fit_lags_sp) {
                            est.lags.push_back(v);
                            est.values.push_back(chi_true(fit_params, v, 0.0));
                        }
                    else
                        for (int u : fit_lags_tm) {
                            est.lags.push_back(u);
                            est.values.push_back(chi_true(fit_params, 0.0, u));
                        }
                    est.pair_counts.assign(est.lags.size(), 0);
                    est.contributing.assign(est.lags.size(), 0);
                    return fit_axis(est, rule);
                };
                if (fit_axis_name == "spatial" || fit_axis_name == "both")
                    doc["spatial"] = fit_to_json(oracle_fit(Axis::spatial));
                if (fit_axis_name == "temporal" || fit_axis_name == "both")
                    doc["temporal"] = fit_to_json(oracle_fit(Axis::temporal));
            } else {
                if (fit_input.empty())
                    throw std::invalid_argument("fit: give --input or --oracle");
                FieldOptions opts{fit_input, fit_frechet};
                SpaceTimeField field = load_field(opts);
                if (fit_lags_sp.empty()) fit_lags_sp = default_spatial_lags(field.grid.n);
                if (fit_lags_tm.empty()) fit_lags_tm = default_temporal_lags(field.grid.t_count);
                if (fit_qt < 0.0) fit_qt = fit_q;
                BiasSettings bias{fit_beta1, 0.0};
                if (fit_axis_name == "spatial" || fit_axis_name == "both") {
                    LagClassIndex index(field.grid.n, fit_lags_sp);
                    double q = threshold_from_quantile(field, fit_q);
                    auto est = average_spatial_extremogram(field, index, q, fit_q,
                                                           fit_correct ? &bias : nullptr);
                    doc["spatial"] = fit_to_json(fit_axis(est, rule));
                }
                if (fit_axis_name == "temporal" || fit_axis_name == "both") {
                    double q = threshold_from_quantile(field, fit_qt);
                    auto est = average_temporal_extremogram(field, fit_lags_tm, q, fit_qt,
                                                            fit_correct ? &bias : nullptr);
                    doc["temporal"] = fit_to_json(fit_axis(est, rule));
                }
            }
            if (doc.empty()) throw std::invalid_argument("--axis must be spatial, temporal or both");
            write_json(doc, fit_out);
            std::cout << "wrote fit to " << fit_out << "\n";
            return 0;
        }

        if (ci->parsed()) {
            SpaceTimeField field = load_field(ci_field);
            SubsampleConfig cfg;
            cfg.axis = parse_axis(ci_axis_name);
            if (ci_lags_sp.empty()) ci_lags_sp = default_spatial_lags(field.grid.n);
            if (ci_lags_tm.empty()) ci_lags_tm = default_temporal_lags(field.grid.t_count);
            cfg.spatial_lags = ci_lags_sp;
            cfg.temporal_lags = ci_lags_tm;
            cfg.quantile_level = ci_q;
            cfg.weights = weights_rule_from_name(ci_weights);
            cfg.bias_correct = ci_correct;
            cfg.beta1 = ci_beta1;
            cfg.level = ci_level;
            if (cfg.axis == Axis::spatial) {
                cfg.scheme.b_s = ci_bs > 0 ? ci_bs : field.grid.n;
                cfg.scheme.b_t = field.grid.t_count;
                cfg.scheme.e_s = ci_es;
                cfg.scheme.e_t = 1;
            } else {
                cfg.scheme.b_s = field.grid.n;
                cfg.scheme.b_t = ci_bt > 0 ? ci_bt : field.grid.t_count;
                cfg.scheme.e_s = 1;
                cfg.scheme.e_t = ci_et;
            }
            ConfidenceRegion region = subsample_ci(field, cfg);
            write_json(region_to_json(region), ci_out);
            std::cout << "wrote confidence intervals to " << ci_out << "\n";
            return 0;
        }

        if (pt->parsed()) {
            SpaceTimeField field = load_field(pt_field);
            LagSets lags;
            lags.spatial = pt_lags_sp.empty() ? default_spatial_lags(field.grid.n) : pt_lags_sp;
            lags.temporal =
                pt_lags_tm.empty() ? default_temporal_lags(field.grid.t_count) : pt_lags_tm;
            RngStream rng(pt_seed);
            PermutationEnvelope env = permutation_test(field, lags, pt_q, pt_n, pt_band, rng);
            write_envelope_csv(env, pt_out);
            std::cout << "wrote permutation envelope to " << pt_out << "\n";
            return 0;
        }

        if (st->parsed()) {
            StudyConfig cfg;
            if (st_scale > 0.0)
                cfg = scaled_preset(st_scale);
            else if (st_preset == "desk")
                cfg = desk_preset();
            else if (st_preset == "full")
                cfg = full_preset();
            else
                throw std::invalid_argument("--preset must be desk or full");
            if (st_reps > 0) cfg.replications = st_reps;
            cfg.seed = st_seed;
            if (st_noise >= 0.0) cfg.noise_sd = st_noise;
            if (st_beta1 > 0.0) cfg.beta1 = st_beta1;
            if (st_qsp > 0.0) cfg.q_spatial = st_qsp;
            if (st_qtm > 0.0) cfg.q_temporal = st_qtm;
            if (!st_weights.empty()) cfg.weights = weights_rule_from_name(st_weights);
            if (st_ci_level > 0.0) cfg.ci_level = st_ci_level;
            if (st_no_ci) cfg.with_ci = false;
            StudySummary summary = run_study(cfg);
            write_json(summary_to_json(summary), st_out);
            std::cout << "study finished: " << summary.theta1.used << "/" << cfg.replications
                      << " replications usable, " << format_double(summary.wall_seconds)
                      << "s\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
