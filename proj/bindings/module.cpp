#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "extremo/io.hpp"
#include "extremo/model.hpp"
#include "extremo/normal.hpp"
#include "extremo/simulate.hpp"
#include "extremo/study.hpp"

namespace py = pybind11;
using namespace extremo;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

SpaceTimeField field_from_array(const DoubleArray& arr) {
    if (arr.ndim() != 3) throw std::invalid_argument("field array must have shape (n, n, t)");
    if (arr.shape(0) != arr.shape(1))
        throw std::invalid_argument("field array must be square in its spatial dimensions");
    SpaceTimeField field;
    field.grid = GridSpec{static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(2))};
    field.values.resize(field.grid.cell_count());
    std::memcpy(field.values.data(), arr.data(), field.values.size() * sizeof(double));
    return field;
}

py::array_t<double> array_from_field(const SpaceTimeField& field) {
    py::array_t<double> arr({field.grid.n, field.grid.n, field.grid.t_count});
    std::memcpy(arr.mutable_data(), field.values.data(), field.values.size() * sizeof(double));
    return arr;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::object: {
            py::dict d;
            for (const auto& [key, value] : j.items()) d[py::str(key)] = json_to_py(value);
            return d;
        }
        case nlohmann::ordered_json::value_t::array: {
            py::list l;
            for (const auto& value : j) l.append(json_to_py(value));
            return l;
        }
        case nlohmann::ordered_json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::ordered_json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::ordered_json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::ordered_json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::ordered_json::value_t::number_float: return py::float_(j.get<double>());
        default: return py::none();
    }
}

Axis axis_from(const std::string& name) {
    if (name == "spatial") return Axis::spatial;
    if (name == "temporal") return Axis::temporal;
    throw std::invalid_argument("axis must be 'spatial' or 'temporal'");
}

std::vector<double> reference_spatial_lags(int n) {
    static const double reference[] = {1.0, 1.4142135623730951, 2.0, 2.23606797749979,
                                       2.8284271247461903, 3.0, 3.1622776601683795,
                                       3.605551275463989, 4.0, 4.123105625617661};
    std::vector<double> out;
    for (double v : reference)
        if (lag_realizable(spatial_lag_squared(v), n)) out.push_back(v);
    return out;
}

std::vector<int> reference_temporal_lags(int t_count) {
    std::vector<int> out;
    for (int u = 1; u <= 10 && u < t_count; ++u) out.push_back(u);
    return out;
}

ExtremogramEstimate estimate_axis(const SpaceTimeField& field, Axis axis, double quantile,
                                  const std::vector<double>& lags_sp,
                                  const std::vector<int>& lags_tm, bool bias_correct,
                                  double beta1) {
    double q = threshold_from_quantile(field, quantile);
    BiasSettings bias{beta1, 0.0};
    const BiasSettings* bias_ptr = bias_correct ? &bias : nullptr;
    if (axis == Axis::spatial) {
        LagClassIndex index(field.grid.n, lags_sp);
        return average_spatial_extremogram(field, index, q, quantile, bias_ptr);
    }
    return average_temporal_extremogram(field, lags_tm, q, quantile, bias_ptr);
}

py::dict estimate_to_dict(const ExtremogramEstimate& est) {
    py::dict d;
    d["axis"] = axis_name(est.axis);
    d["lags"] = est.lags;
    py::list values, corrected;
    for (const auto& v : est.values) values.append(v ? py::object(py::float_(*v)) : py::none());
    if (est.bias_corrected)
        for (const auto& v : est.corrected)
            corrected.append(v ? py::object(py::float_(*v)) : py::none());
    d["values"] = values;
    d["corrected"] = est.bias_corrected ? py::object(corrected) : py::none();
    d["pair_counts"] = est.pair_counts;
    d["contributing"] = est.contributing;
    d["threshold"] = est.threshold;
    d["quantile_level"] = est.quantile_level;
    return d;
}

}  // namespace

PYBIND11_MODULE(_extremo, m) {
    m.doc() = "max-stable space-time fields: simulation and dependence estimation";

    m.def(
        "delta",
        [](double theta1, double alpha1, double theta2, double alpha2, double v, double u) {
            return delta(DependenceParams{theta1, alpha1, theta2, alpha2}, v, u);
        },
        py::arg("theta1"), py::arg("alpha1"), py::arg("theta2"), py::arg("alpha2"), py::arg("v"),
        py::arg("u"), "dependence function 2*theta1*v^alpha1 + 2*theta2*u^alpha2");

    m.def(
        "chi_true",
        [](double theta1, double alpha1, double theta2, double alpha2, double v, double u) {
            return chi_true(DependenceParams{theta1, alpha1, theta2, alpha2}, v, u);
        },
        py::arg("theta1"), py::arg("alpha1"), py::arg("theta2"), py::arg("alpha2"), py::arg("v"),
        py::arg("u"), "model extremogram at spatial distance v and time lag u");

    m.def("transform_T", &transform_T, py::arg("chi"),
          "T(chi) = 2*log(Phi^-1(1 - chi/2)), the linearizing transform");

    m.def(
        "bivariate_cdf",
        [](double theta1, double alpha1, double theta2, double alpha2, double v, double u,
           double x1, double x2) {
            return bivariate_cdf(DependenceParams{theta1, alpha1, theta2, alpha2}, v, u, x1, x2);
        },
        py::arg("theta1"), py::arg("alpha1"), py::arg("theta2"), py::arg("alpha2"), py::arg("v"),
        py::arg("u"), py::arg("x1"), py::arg("x2"));

    m.def("std_normal_cdf", &std_normal_cdf, py::arg("x"));
    m.def("std_normal_quantile", &std_normal_quantile, py::arg("p"));

    m.def(
        "simulate",
        [](int n, int t, double theta1, double alpha1, double theta2, double alpha2,
           std::uint64_t seed, double noise_sd) {
            GridSpec grid{n, t};
            DependenceParams params{theta1, alpha1, theta2, alpha2};
            SpaceTimeField field;
            {
                py::gil_scoped_release release;
                RngStream rng(seed);
                RngStream sim_rng = rng.derive(1);
                field = simulate_brown_resnick(grid, params, sim_rng);
                if (noise_sd > 0.0) {
                    RngStream noise_rng = rng.derive(2);
                    add_observational_noise(field, noise_sd, noise_rng);
                }
            }
            return array_from_field(field);
        },
        py::arg("n"), py::arg("t"), py::arg("theta1"), py::arg("alpha1"), py::arg("theta2"),
        py::arg("alpha2"), py::arg("seed"), py::arg("noise_sd") = 0.0,
        "draw one field with unit Frechet margins; returns an (n, n, t) array");

    m.def(
        "frechet_transform",
        [](const DoubleArray& arr) { return array_from_field(frechet_transform(field_from_array(arr))); },
        py::arg("field"), "rank transform to standard Frechet margins, per site along time");

    m.def(
        "extremogram",
        [](const DoubleArray& arr, const std::string& axis, double quantile,
           std::optional<std::vector<double>> lags_spatial,
           std::optional<std::vector<int>> lags_temporal, bool bias_correct, double beta1) {
            SpaceTimeField field = field_from_array(arr);
            Axis ax = axis_from(axis);
            auto lags_sp = lags_spatial.value_or(reference_spatial_lags(field.grid.n));
            auto lags_tm = lags_temporal.value_or(reference_temporal_lags(field.grid.t_count));
            auto est = estimate_axis(field, ax, quantile, lags_sp, lags_tm, bias_correct, beta1);
            return estimate_to_dict(est);
        },
        py::arg("field"), py::arg("axis"), py::arg("quantile") = 0.9,
        py::arg("lags_spatial") = py::none(), py::arg("lags_temporal") = py::none(),
        py::arg("bias_correct") = false, py::arg("beta1") = 0.3,
        "averaged empirical extremogram along one axis");

    m.def(
        "fit",
        [](const DoubleArray& arr, const std::string& axis, double quantile,
           const std::string& weights, std::optional<std::vector<double>> lags_spatial,
           std::optional<std::vector<int>> lags_temporal, bool bias_correct, double beta1) {
            SpaceTimeField field = field_from_array(arr);
            Axis ax = axis_from(axis);
            auto lags_sp = lags_spatial.value_or(reference_spatial_lags(field.grid.n));
            auto lags_tm = lags_temporal.value_or(reference_temporal_lags(field.grid.t_count));
            auto est = estimate_axis(field, ax, quantile, lags_sp, lags_tm, bias_correct, beta1);
            WlseFit result = fit_axis(est, weights_rule_from_name(weights));
            return json_to_py(fit_to_json(result));
        },
        py::arg("field"), py::arg("axis"), py::arg("quantile") = 0.9,
        py::arg("weights") = "exp2", py::arg("lags_spatial") = py::none(),
        py::arg("lags_temporal") = py::none(), py::arg("bias_correct") = false,
        py::arg("beta1") = 0.3, "estimate (theta, alpha) for one axis from one field");

    m.def(
        "subsample_ci",
        [](const DoubleArray& arr, const std::string& axis, int block_extent, int block_shift,
           double quantile, const std::string& weights, double level, bool bias_correct,
           double beta1, std::optional<std::vector<double>> lags_spatial,
           std::optional<std::vector<int>> lags_temporal) {
            SpaceTimeField field = field_from_array(arr);
            SubsampleConfig cfg;
            cfg.axis = axis_from(axis);
            cfg.spatial_lags = lags_spatial.value_or(reference_spatial_lags(
                cfg.axis == Axis::spatial ? block_extent : field.grid.n));
            cfg.temporal_lags = lags_temporal.value_or(reference_temporal_lags(
                cfg.axis == Axis::temporal ? block_extent : field.grid.t_count));
            cfg.quantile_level = quantile;
            cfg.weights = weights_rule_from_name(weights);
            cfg.bias_correct = bias_correct;
            cfg.beta1 = beta1;
            cfg.level = level;
            if (cfg.axis == Axis::spatial)
                cfg.scheme = BlockScheme{block_extent, field.grid.t_count, block_shift, 1};
            else
                cfg.scheme = BlockScheme{field.grid.n, block_extent, 1, block_shift};
            ConfidenceRegion region = subsample_ci(field, cfg);
            return json_to_py(region_to_json(region));
        },
        py::arg("field"), py::arg("axis"), py::arg("block_extent"), py::arg("block_shift") = 1,
        py::arg("quantile") = 0.9, py::arg("weights") = "exp2", py::arg("level") = 0.95,
        py::arg("bias_correct") = false, py::arg("beta1") = 0.3,
        py::arg("lags_spatial") = py::none(), py::arg("lags_temporal") = py::none(),
        "subsampling confidence intervals for one axis");

    m.def(
        "permutation_envelope",
        [](const DoubleArray& arr, double quantile, int n_perm, double band, std::uint64_t seed,
           std::optional<std::vector<double>> lags_spatial,
           std::optional<std::vector<int>> lags_temporal) {
            SpaceTimeField field = field_from_array(arr);
            LagSets lags;
            lags.spatial = lags_spatial.value_or(reference_spatial_lags(field.grid.n));
            lags.temporal = lags_temporal.value_or(reference_temporal_lags(field.grid.t_count));
            PermutationEnvelope env;
            {
                py::gil_scoped_release release;
                RngStream rng(seed);
                env = permutation_test(field, lags, quantile, n_perm, band, rng);
            }
            py::dict d;
            d["n_perm"] = env.n_perm;
            d["band"] = env.band;
            d["threshold"] = env.threshold;
            auto pack = [&](const auto& lag_list, const auto& obs, const auto& lo,
                            const auto& hi) {
                py::list rows;
                for (std::size_t i = 0; i < lag_list.size(); ++i) {
                    py::dict row;
                    row["lag"] = lag_list[i];
                    row["observed"] = obs[i] ? py::object(py::float_(*obs[i])) : py::none();
                    row["lower"] = lo[i] ? py::object(py::float_(*lo[i])) : py::none();
                    row["upper"] = hi[i] ? py::object(py::float_(*hi[i])) : py::none();
                    rows.append(row);
                }
                return rows;
            };
            d["spatial"] = pack(env.spatial_lags, env.spatial_observed, env.spatial_lo,
                                env.spatial_hi);
            d["temporal"] = pack(env.temporal_lags, env.temporal_observed, env.temporal_lo,
                                 env.temporal_hi);
            return d;
        },
        py::arg("field"), py::arg("quantile") = 0.9, py::arg("n_perm") = 1000,
        py::arg("band") = 0.95, py::arg("seed") = 1, py::arg("lags_spatial") = py::none(),
        py::arg("lags_temporal") = py::none(),
        "pointwise no-dependence acceptance bands from joint permutations");

    m.def(
        "run_study",
        [](const std::string& preset, double scale, int reps, std::uint64_t seed, double noise_sd,
           bool with_ci) {
            StudyConfig cfg;
            if (scale > 0.0)
                cfg = scaled_preset(scale);
            else if (preset == "desk")
                cfg = desk_preset();
            else if (preset == "full")
                cfg = full_preset();
            else
                throw std::invalid_argument("preset must be 'desk' or 'full'");
            if (reps > 0) cfg.replications = reps;
            cfg.seed = seed;
            cfg.noise_sd = noise_sd;
            cfg.with_ci = with_ci;
            StudySummary summary;
            {
                py::gil_scoped_release release;
                summary = run_study(cfg);
            }
            return json_to_py(summary_to_json(summary));
        },
        py::arg("preset") = "desk", py::arg("scale") = 0.0, py::arg("reps") = 0,
        py::arg("seed") = 1, py::arg("noise_sd") = 0.0, py::arg("with_ci") = true,
        "simulate, estimate and summarize over replications");
}
