#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "extremo/inference.hpp"
#include "extremo/simulate.hpp"

using namespace extremo;

TEST_CASE("block counts along an axis") {
    CHECK(block_count_along(70, 50, 2) == 11);
    CHECK(block_count_along(30, 21, 2) == 5);
    CHECK(block_count_along(120, 80, 1) == 41);
    CHECK(block_count_along(10, 10, 1) == 1);
    CHECK(block_count_along(10, 10, 3) == 1);
    CHECK_THROWS_AS(block_count_along(10, 11, 1), std::invalid_argument);
    CHECK_THROWS_AS(block_count_along(10, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(block_count_along(10, 5, 0), std::invalid_argument);
}

TEST_CASE("block enumeration covers the stepped origins") {
    GridSpec grid{70, 10};
    BlockScheme scheme{50, 10, 2, 1};
    auto blocks = enumerate_blocks(grid, scheme);
    CHECK(blocks.size() == 121);  // 11 x 11 spatial origins, one temporal
    CHECK(blocks.front().i1 == 0);
    CHECK(blocks.front().i2 == 0);
    CHECK(blocks.front().t == 0);
    CHECK(blocks.back().i1 == 20);
    CHECK(blocks.back().i2 == 20);
    for (const auto& b : blocks) {
        CHECK(b.i1 % 2 == 0);
        CHECK(b.i1 + scheme.b_s <= grid.n);
        CHECK(b.t + scheme.b_t <= grid.t_count);
    }

    // full-size block: exactly one origin
    auto whole = enumerate_blocks(grid, BlockScheme{70, 10, 2, 1});
    CHECK(whole.size() == 1);
}

TEST_CASE("extract block copies the right cells") {
    GridSpec grid{4, 3};
    SpaceTimeField field;
    field.grid = grid;
    field.values.resize(grid.cell_count());
    for (long i = 0; i < grid.cell_count(); ++i) field.values[i] = static_cast<double>(i);

    BlockScheme scheme{2, 2, 1, 1};
    auto block = extract_block(field, BlockOrigin{1, 2, 1}, scheme);
    CHECK(block.grid.n == 2);
    CHECK(block.grid.t_count == 2);
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int t = 0; t < 2; ++t)
                CHECK(block.at(i1, i2, t) == field.at(1 + i1, 2 + i2, 1 + t));
}

TEST_CASE("tau rates") {
    CHECK(tau_rate(Axis::spatial, 70, 0.3) == doctest::Approx(std::pow(70.0, 0.7)).epsilon(1e-14));
    CHECK(tau_rate(Axis::temporal, 300, 0.3) ==
          doctest::Approx(std::pow(std::sqrt(300.0), 0.7)).epsilon(1e-14));
}

TEST_CASE("confidence interval formulas on a synthetic field") {
    // small but real: simulate once, then check the interval arithmetic
    GridSpec grid{8, 4};
    DependenceParams params{0.4, 1.5, 0.2, 1.0};
    RngStream rng(13);
    SpaceTimeField field = simulate_brown_resnick(grid, params, rng);

    SubsampleConfig cfg;
    cfg.axis = Axis::spatial;
    cfg.scheme = BlockScheme{6, 4, 1, 1};
    cfg.spatial_lags = {1.0, 1.4142135623730951, 2.0};
    cfg.quantile_level = 0.85;
    cfg.level = 0.9;
    cfg.beta1 = 0.3;

    ConfidenceRegion region = subsample_ci(field, cfg);
    CHECK(region.blocks_used + region.blocks_failed == 9);
    CHECK(region.tau_full == doctest::Approx(std::pow(8.0, 0.7)).epsilon(1e-14));

    double shift = region.c / region.tau_full;
    CHECK(region.theta_lo ==
          doctest::Approx(region.theta_hat * std::exp(-shift)).epsilon(1e-12));
    CHECK(region.theta_hi ==
          doctest::Approx(region.theta_hat * std::exp(shift)).epsilon(1e-12));
    CHECK(region.alpha_lo == doctest::Approx(std::max(region.alpha_hat - shift, 0.0)).epsilon(1e-12));
    CHECK(region.alpha_hi == doctest::Approx(std::min(region.alpha_hat + shift, 2.0)).epsilon(1e-12));
    CHECK(region.theta_lo <= region.theta_hat);
    CHECK(region.theta_hat <= region.theta_hi);
    CHECK(region.alpha_hi <= 2.0);
    CHECK(region.alpha_lo >= 0.0);
}

TEST_CASE("interval endpoints at a frozen c") {
    // theta_hat = 0.4, c/tau = 0.1: endpoints are 0.4 e^{-0.1} and 0.4 e^{0.1}
    double theta_hat = 0.4;
    double shift = 0.1;
    CHECK(theta_hat * std::exp(-shift) ==
          doctest::Approx(0.361934967214384).epsilon(1e-12));
    CHECK(theta_hat * std::exp(shift) ==
          doctest::Approx(0.442068367230259).epsilon(1e-12));
}

TEST_CASE("subsample quantile picks the lower order statistic") {
    CHECK(lower_quantile({1.0, 2.0, 3.0, 4.0}, 0.95) == 4.0);
    CHECK(lower_quantile({1.0, 2.0, 3.0, 4.0}, 0.75) == 3.0);
    CHECK(lower_quantile(std::vector<double>(20, 0.0), 0.95) == 0.0);
}

TEST_CASE("subsample rejects bad configurations") {
    GridSpec grid{6, 4};
    DependenceParams params{0.4, 1.5, 0.2, 1.0};
    RngStream rng(29);
    SpaceTimeField field = simulate_brown_resnick(grid, params, rng);

    SubsampleConfig cfg;
    cfg.axis = Axis::spatial;
    cfg.scheme = BlockScheme{4, 3, 1, 1};  // does not span the time depth
    cfg.spatial_lags = {1.0};
    CHECK_THROWS_AS(subsample_ci(field, cfg), std::invalid_argument);

    cfg.scheme = BlockScheme{4, 4, 1, 1};
    cfg.spatial_lags = {};
    CHECK_THROWS_AS(subsample_ci(field, cfg), std::invalid_argument);

    cfg.spatial_lags = {5.0};  // longer than the block side allows
    CHECK_THROWS_AS(subsample_ci(field, cfg), std::invalid_argument);

    cfg.spatial_lags = {1.0};
    cfg.level = 1.0;
    CHECK_THROWS_AS(subsample_ci(field, cfg), std::invalid_argument);

    cfg.level = 0.95;
    cfg.axis = Axis::temporal;
    cfg.temporal_lags = {1, 2};
    cfg.scheme = BlockScheme{5, 3, 1, 1};  // does not span the grid side
    CHECK_THROWS_AS(subsample_ci(field, cfg), std::invalid_argument);
}

TEST_CASE("permutation envelope is deterministic and sane") {
    GridSpec grid{5, 8};
    SpaceTimeField field;
    field.grid = grid;
    field.values.resize(grid.cell_count());
    RngStream gen(41);
    for (double& v : field.values) v = gen.exponential();

    LagSets lags{{1.0, 1.4142135623730951, 2.0}, {1, 2, 3}};
    RngStream r1(77), r2(77);
    auto e1 = permutation_test(field, lags, 0.8, 200, 0.9, r1);
    auto e2 = permutation_test(field, lags, 0.8, 200, 0.9, r2);

    REQUIRE(e1.spatial_lags.size() == 3);
    REQUIRE(e1.temporal_lags.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(e1.spatial_lo[i].has_value());
        REQUIRE(e1.spatial_hi[i].has_value());
        CHECK(*e1.spatial_lo[i] <= *e1.spatial_hi[i]);
        CHECK(*e1.spatial_lo[i] == *e2.spatial_lo[i]);
        CHECK(*e1.spatial_hi[i] == *e2.spatial_hi[i]);
        REQUIRE(e1.temporal_lo[i].has_value());
        CHECK(*e1.temporal_lo[i] <= *e1.temporal_hi[i]);
        CHECK(*e1.temporal_observed[i] == *e2.temporal_observed[i]);
    }
    CHECK(e1.threshold == e2.threshold);

    // iid values: observed extremograms should sit inside the band at most lags
    int inside = 0, total = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (e1.spatial_observed[i]) {
            ++total;
            if (*e1.spatial_lo[i] <= *e1.spatial_observed[i] &&
                *e1.spatial_observed[i] <= *e1.spatial_hi[i])
                ++inside;
        }
    }
    CHECK(inside >= total - 1);
}

TEST_CASE("permutation test rejects bad settings") {
    GridSpec grid{3, 3};
    SpaceTimeField field;
    field.grid = grid;
    field.values.resize(grid.cell_count());
    RngStream gen(1);
    for (double& v : field.values) v = gen.uniform01();
    LagSets lags{{1.0}, {1}};
    RngStream rng(2);
    CHECK_THROWS_AS(permutation_test(field, lags, 0.8, 10, 0.95, rng), std::invalid_argument);
    CHECK_THROWS_AS(permutation_test(field, lags, 0.8, 100, 1.0, rng), std::invalid_argument);
    LagSets bad{{1.2}, {1}};
    CHECK_THROWS_AS(permutation_test(field, bad, 0.8, 100, 0.9, rng), std::invalid_argument);
}
