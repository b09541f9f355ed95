#include <doctest.h>

#include <stdexcept>

#include "extremo/types.hpp"

using namespace extremo;

TEST_CASE("parameter validation accepts the open box") {
    CHECK_NOTHROW(DependenceParams{0.4, 1.5, 0.2, 1.0}.validate());
    CHECK_NOTHROW(DependenceParams{1e-8, 2.0, 5.0, 2.0}.validate());
    CHECK_THROWS_AS((DependenceParams{0.0, 1.5, 0.2, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DependenceParams{0.4, 0.0, 0.2, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DependenceParams{0.4, 2.1, 0.2, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DependenceParams{0.4, 1.5, -0.2, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("grid indexing is time fastest") {
    GridSpec grid{3, 4};
    CHECK(grid.site_count() == 9);
    CHECK(grid.cell_count() == 36);
    CHECK(grid.index(0, 0, 0) == 0);
    CHECK(grid.index(0, 0, 3) == 3);
    CHECK(grid.index(0, 1, 0) == 4);
    CHECK(grid.index(1, 0, 0) == 12);
    CHECK(grid.index(2, 2, 3) == 35);
    CHECK_THROWS_AS((GridSpec{0, 4}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{3, 0}.validate()), std::invalid_argument);
}

TEST_CASE("spatial lags map to integer squared distances") {
    CHECK(spatial_lag_squared(1.0) == 1);
    CHECK(spatial_lag_squared(1.4142135623730951) == 2);
    CHECK(spatial_lag_squared(2.0) == 4);
    CHECK(spatial_lag_squared(2.23606797749979) == 5);
    CHECK(spatial_lag_squared(3.1622776601683795) == 10);
    CHECK(spatial_lag_squared(1.2) == -1);
    CHECK(spatial_lag_squared(0.0) == -1);
    CHECK(spatial_lag_squared(-1.0) == -1);
}

TEST_CASE("lag realizability on a square grid") {
    // distances 1, sqrt(2), 2 fit on 3x3; sqrt(5) needs offsets (1,2); 3 does not fit
    CHECK(lag_realizable(1, 3));
    CHECK(lag_realizable(2, 3));
    CHECK(lag_realizable(4, 3));
    CHECK(lag_realizable(5, 3));
    CHECK_FALSE(lag_realizable(9, 3));
    CHECK_FALSE(lag_realizable(3, 30));  // 3 is not a sum of two squares
    CHECK(lag_realizable(8, 3));
}

TEST_CASE("lag set validation") {
    GridSpec grid{5, 6};
    LagSets ok{{1.0, 1.4142135623730951, 2.0}, {1, 2, 5}};
    CHECK_NOTHROW(validate_lags(grid, ok));

    LagSets unsorted{{2.0, 1.0}, {1}};
    CHECK_THROWS_AS(validate_lags(grid, unsorted), std::invalid_argument);

    LagSets not_realizable{{1.7320508075688772}, {1}};  // sqrt(3)
    CHECK_THROWS_AS(validate_lags(grid, not_realizable), std::invalid_argument);

    LagSets too_deep{{1.0}, {6}};
    CHECK_THROWS_AS(validate_lags(grid, too_deep), std::invalid_argument);

    LagSets zero_lag{{1.0}, {0}};
    CHECK_THROWS_AS(validate_lags(grid, zero_lag), std::invalid_argument);
}
