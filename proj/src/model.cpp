#include "extremo/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "extremo/normal.hpp"

namespace extremo {

double delta(const DependenceParams& params, double v, double u) {
    params.validate();
    if (v < 0.0 || u < 0.0)
        throw std::domain_error("delta: lags must be nonnegative");
    double sp = v == 0.0 ? 0.0 : 2.0 * params.theta1 * std::pow(v, params.alpha1);
    double tm = u == 0.0 ? 0.0 : 2.0 * params.theta2 * std::pow(u, params.alpha2);
    return sp + tm;
}

double chi_true(const DependenceParams& params, double v, double u) {
    // 2*(1 - Phi(sqrt(d/2))) == erfc(sqrt(d)/2), which stays accurate when the
    // tail probability is tiny.
    double d = delta(params, v, u);
    return std::erfc(0.5 * std::sqrt(d));
}

double transform_T(double chi) {
    if (!(chi > 0.0) || !(chi < 1.0))
        throw std::domain_error("transform_T: chi must lie strictly between 0 and 1");
    // Phi^{-1}(1 - chi/2) evaluated as -Phi^{-1}(chi/2): going through the small
    // tail keeps relative precision once chi drops below machine epsilon of 1.
    double q = -std_normal_quantile(0.5 * chi);
    return 2.0 * std::log(q);
}

double bivariate_cdf(const DependenceParams& params, double v, double u, double x1, double x2) {
    double d = delta(params, v, u);
    if (!(x1 > 0.0) || !(x2 > 0.0))
        throw std::domain_error("bivariate_cdf: x1 and x2 must be positive");
    if (d == 0.0) return std::exp(-1.0 / std::min(x1, x2));
    double root = std::sqrt(2.0 * d);
    double half = std::sqrt(0.5 * d);
    double lr = std::log(x2 / x1);
    double expo = std_normal_cdf(lr / root + half) / x1 + std_normal_cdf(-lr / root + half) / x2;
    return std::exp(-expo);
}

}  // namespace extremo
