#include "extremo/simulate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "extremo/model.hpp"

namespace extremo {

namespace {

constexpr long kCandidateCap = 1000000;

}  // namespace

IncrementFactor::IncrementFactor(const GridSpec& grid, const DependenceParams& params)
    : grid_(grid), params_(params) {
    grid.validate();
    params.validate();
    n_points_ = grid.cell_count();

    // lag table: every pairwise delta on the grid is delta(sqrt(d2), dt) with
    // d2 an integer up to 2(n-1)^2 and dt < t_count
    int max_d2 = 2 * (grid.n - 1) * (grid.n - 1);
    delta_tab_.resize(static_cast<std::size_t>(max_d2 + 1) * grid.t_count);
    for (int d2 = 0; d2 <= max_d2; ++d2)
        for (int dt = 0; dt < grid.t_count; ++dt)
            delta_tab_[static_cast<std::size_t>(d2) * grid.t_count + dt] =
                delta(params, std::sqrt(static_cast<double>(d2)), dt);

    coord_i1_.resize(n_points_);
    coord_i2_.resize(n_points_);
    coord_t_.resize(n_points_);
    for (long p = 0; p < n_points_; ++p) {
        coord_t_[p] = static_cast<int>(p % grid.t_count);
        long rest = p / grid.t_count;
        coord_i2_[p] = static_cast<int>(rest % grid.n);
        coord_i1_[p] = static_cast<int>(rest / grid.n);
    }

    long m = n_points_ - 1;
    if (m == 0) return;  // single cell: W is identically zero

    Eigen::MatrixXd cov(m, m);
    for (long a = 0; a < m; ++a) {
        double da = delta_between(a + 1, 0);
        for (long b = 0; b <= a; ++b)
            cov(a, b) = da + delta_between(b + 1, 0) - delta_between(a + 1, b + 1);
    }
    double jitter = 1e-10 * cov.diagonal().maxCoeff();
    cov.diagonal().array() += jitter;

    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(cov);  // reads the lower triangle in place
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("increment covariance is not positive definite after jitter");

    tri_.resize(static_cast<std::size_t>(m) * (m + 1) / 2);
    std::size_t off = 0;
    for (long r = 0; r < m; ++r, off += r)
        for (long c = 0; c <= r; ++c) tri_[off + c] = cov(r, c);
}

double IncrementFactor::delta_between(long a, long b) const {
    int d1 = coord_i1_[a] - coord_i1_[b];
    int d2 = coord_i2_[a] - coord_i2_[b];
    int dt = coord_t_[a] - coord_t_[b];
    if (dt < 0) dt = -dt;
    return delta_tab_[static_cast<std::size_t>(d1 * d1 + d2 * d2) * grid_.t_count + dt];
}

void IncrementFactor::fill_normals(RngStream& rng, std::vector<double>& z) const {
    z.resize(n_points_ - 1 > 0 ? n_points_ - 1 : 0);
    for (double& zi : z) zi = rng.normal();
}

void IncrementFactor::accumulate(const std::vector<double>& z, std::vector<double>& w, long from,
                                 long to) const {
    if (from == 0) {
        w[0] = 0.0;
        from = 1;
    }
    for (long p = from; p < to; ++p) {
        long r = p - 1;
        const double* row = tri_.data() + static_cast<std::size_t>(r) * (r + 1) / 2;
        const double* zv = z.data();
        double acc = 0.0;
        for (long c = 0; c <= r; ++c) acc += row[c] * zv[c];
        w[p] = acc;
    }
}

std::vector<double> IncrementFactor::draw_increments(RngStream& rng) const {
    std::vector<double> z;
    fill_normals(rng, z);
    std::vector<double> w(n_points_);
    accumulate(z, w, 0, n_points_);
    return w;
}

namespace {

SpaceTimeField run_simulation(const IncrementFactor& factor, RngStream& rng,
                              const std::vector<long>* order) {
    const long n = factor.point_count();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    if (order) {
        std::vector<char> seen(n, 0);
        if (static_cast<long>(order->size()) != n)
            throw std::invalid_argument("site order must cover every grid cell exactly once");
        for (long p : *order) {
            if (p < 0 || p >= n || seen[p])
                throw std::invalid_argument("site order must cover every grid cell exactly once");
            seen[p] = 1;
        }
    }

    // running field maximum, kept on log scale; exponentiated once at the end
    std::vector<double> log_z(n, neg_inf);
    std::vector<double> z, w(n), site_delta(n);
    std::vector<long> visited;
    visited.reserve(n);
    long prefix = 0;  // all visited sites (and the current one) lie in [0, prefix]

    for (long step = 0; step < n; ++step) {
        long k = order ? (*order)[step] : step;
        if (k > prefix) prefix = k;
        for (long j = 0; j < n; ++j) site_delta[j] = factor.delta_between(j, k);

        double exp_sum = 0.0;
        long draws = 0;
        for (;;) {
            exp_sum += rng.exponential();
            double log_zeta = -std::log(exp_sum);
            if (log_zeta <= log_z[k]) break;
            if (++draws > kCandidateCap)
                throw std::runtime_error(
                    "extremal function draw cap (1e6) exceeded at one site; the dependence "
                    "parameters are likely numerically degenerate");

            factor.fill_normals(rng, z);
            factor.accumulate(z, w, 0, prefix + 1);
            double wk = w[k];

            // candidate contributes log_zeta + W(p) - W(p_k) - delta(p - p_k);
            // it is rejected as soon as it would touch an already finished site
            bool accept = true;
            for (long j : visited) {
                if (log_zeta + w[j] - wk - site_delta[j] >= log_z[j]) {
                    accept = false;
                    break;
                }
            }
            if (!accept) continue;

            factor.accumulate(z, w, prefix + 1, n);
            for (long p = 0; p < n; ++p) {
                double cand = log_zeta + w[p] - wk - site_delta[p];
                if (cand > log_z[p]) log_z[p] = cand;
            }
            // log_z[k] is now log_zeta, so the next candidate ends the loop
        }
        visited.push_back(k);
    }

    SpaceTimeField field;
    field.grid = factor.grid();
    field.margins = MarginTag::frechet;
    field.values.resize(n);
    for (long p = 0; p < n; ++p) field.values[p] = std::exp(log_z[p]);
    return field;
}

}  // namespace

SpaceTimeField simulate_brown_resnick(const IncrementFactor& factor, RngStream& rng) {
    return run_simulation(factor, rng, nullptr);
}

SpaceTimeField simulate_brown_resnick(const GridSpec& grid, const DependenceParams& params,
                                      RngStream& rng) {
    IncrementFactor factor(grid, params);
    return run_simulation(factor, rng, nullptr);
}

SpaceTimeField simulate_with_site_order(const IncrementFactor& factor, RngStream& rng,
                                        const std::vector<long>& order) {
    return run_simulation(factor, rng, &order);
}

void add_observational_noise(SpaceTimeField& field, double sd, RngStream& rng) {
    if (sd < 0.0) throw std::invalid_argument("noise sd must be nonnegative");
    if (sd == 0.0) return;
    for (double& v : field.values) v += sd * std::abs(rng.normal());
    field.margins = MarginTag::raw;
}

}  // namespace extremo
