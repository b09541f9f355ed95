#pragma once

#include "extremo/types.hpp"

namespace extremo {

// delta(v, u) = 2*theta1*v^alpha1 + 2*theta2*u^alpha2 for v, u >= 0.
double delta(const DependenceParams& params, double v, double u);

// Model extremogram chi(v, u) = 2*(1 - Phi(sqrt(delta(v, u)/2))).
double chi_true(const DependenceParams& params, double v, double u);

// T(chi) = 2*log(Phi^{-1}(1 - chi/2)) for chi in (0, 1). Linearizes the model
// extremogram: T(chi_true(v, 0)) = log(theta1) + alpha1*log(v), and likewise on
// the time axis.
double transform_T(double chi);

// Joint distribution function P(eta(s, t) <= x1, eta(s + v, t + u) <= x2) of the
// process at two cells separated by spatial distance v and time lag u.
double bivariate_cdf(const DependenceParams& params, double v, double u, double x1, double x2);

}  // namespace extremo
