"""Max-stable space-time fields: simulation and dependence estimation."""

from ._extremo import (
    bivariate_cdf,
    chi_true,
    delta,
    extremogram,
    fit,
    frechet_transform,
    permutation_envelope,
    run_study,
    simulate,
    std_normal_cdf,
    std_normal_quantile,
    subsample_ci,
    transform_T,
)

__all__ = [
    "bivariate_cdf",
    "chi_true",
    "delta",
    "extremogram",
    "fit",
    "frechet_transform",
    "permutation_envelope",
    "run_study",
    "simulate",
    "std_normal_cdf",
    "std_normal_quantile",
    "subsample_ci",
    "transform_T",
]
