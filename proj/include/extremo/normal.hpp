#pragma once

namespace extremo {

// Standard normal distribution function Phi(x).
double std_normal_cdf(double x);

// Inverse of Phi on (0, 1). Throws std::domain_error outside the open interval.
double std_normal_quantile(double p);

}  // namespace extremo
