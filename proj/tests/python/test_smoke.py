"""End-to-end checks of the python bindings."""

import math

import numpy as np
import pytest

import extremo


PARAMS = dict(theta1=0.4, alpha1=1.5, theta2=0.2, alpha2=1.0)


def test_scalar_model_functions():
    assert extremo.delta(v=2.0, u=3.0, **PARAMS) == pytest.approx(3.46274169979695, abs=1e-13)
    assert extremo.chi_true(v=1.0, u=0.0, **PARAMS) == pytest.approx(
        0.527089256865538, abs=1e-13
    )
    chi = extremo.chi_true(v=1.0, u=0.0, **PARAMS)
    assert extremo.transform_T(chi) == pytest.approx(math.log(0.4), abs=1e-11)
    assert extremo.bivariate_cdf(v=1.0, u=0.0, x1=1.0, x2=1.0, **PARAMS) == pytest.approx(
        0.229257204228215, abs=1e-13
    )
    assert extremo.std_normal_cdf(0.0) == 0.5
    assert extremo.std_normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-11)


def test_simulate_shape_and_determinism():
    a = extremo.simulate(n=5, t=3, seed=11, **PARAMS)
    b = extremo.simulate(n=5, t=3, seed=11, **PARAMS)
    c = extremo.simulate(n=5, t=3, seed=12, **PARAMS)
    assert a.shape == (5, 5, 3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert (a > 0).all()


def test_extremogram_and_fit_run():
    field = extremo.simulate(n=8, t=6, seed=3, **PARAMS)
    est = extremo.extremogram(field, axis="spatial", quantile=0.85)
    assert est["axis"] == "spatial"
    assert len(est["values"]) == len(est["lags"])
    assert est["corrected"] is None

    corrected = extremo.extremogram(field, axis="spatial", quantile=0.85, bias_correct=True)
    assert corrected["corrected"] is not None

    result = extremo.fit(field, axis="spatial", quantile=0.85)
    assert set(result) >= {"theta", "alpha", "unconstrained_alpha", "intercept", "lags_used"}
    assert result["alpha"] <= 2.0


def test_frechet_transform_ranks():
    field = np.array([5.0, 1.0, 9.0]).reshape(1, 1, 3)
    out = extremo.frechet_transform(field)
    expected = [-1.0 / math.log(k / 4.0) for k in (2, 1, 3)]
    assert out[0, 0, :] == pytest.approx(expected, abs=1e-14)


def test_permutation_envelope_runs():
    rng = np.random.default_rng(7)
    field = -1.0 / np.log(rng.uniform(size=(6, 6, 4)))
    env = extremo.permutation_envelope(field, quantile=0.85, n_perm=60, band=0.9, seed=5)
    assert env["n_perm"] == 60
    assert len(env["spatial"]) > 0
    row = env["spatial"][0]
    assert row["lower"] is None or row["lower"] <= row["upper"]


def test_subsample_ci_runs():
    field = extremo.simulate(n=8, t=4, seed=19, **PARAMS)
    try:
        region = extremo.subsample_ci(
            field, axis="spatial", block_extent=6, quantile=0.85,
            lags_spatial=[1.0, math.sqrt(2.0), 2.0],
        )
    except RuntimeError:
        pytest.skip("degenerate fit on this tiny field")
    assert region["theta_interval"][0] <= region["theta_hat"] <= region["theta_interval"][1]
    assert region["alpha_interval"][1] <= 2.0


def test_run_study_summary():
    summary = extremo.run_study(scale=0.05, reps=1, seed=4, with_ci=False)
    assert summary["config_echo"]["replications"] == 1
    assert len(summary["reps"]) == 1
    assert "theta1" in summary["per_param"]


def test_input_validation():
    with pytest.raises(Exception):
        extremo.simulate(n=0, t=3, seed=1, **PARAMS)
    with pytest.raises(Exception):
        extremo.extremogram(np.ones((3, 4, 2)), axis="spatial")
    with pytest.raises(Exception):
        extremo.fit(np.ones((4, 4, 2)), axis="sideways")
