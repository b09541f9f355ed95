#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "extremo/normal.hpp"

using namespace extremo;

TEST_CASE("normal cdf reference values") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-14));
    CHECK(std_normal_cdf(-1.0) == doctest::Approx(0.158655253931457).epsilon(1e-14));
    CHECK(std_normal_cdf(40.0) == 1.0);
    CHECK(std_normal_cdf(-38.0) > 0.0);  // erfc keeps the lower tail alive until ~-38.5
}

TEST_CASE("normal quantile reference values") {
    CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(std_normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(std_normal_quantile(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quantile inverts cdf across the range") {
    // above x ~ 5.5 the round trip is limited by double spacing near p = 1,
    // not by the quantile; the tiny-tail case below covers the far tail instead
    for (double x = -8.0; x <= 5.5; x += 0.25) {
        double p = std_normal_cdf(x);
        CHECK(std_normal_quantile(p) == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("quantile handles tiny tail probabilities") {
    // round trip through the lower tail, where 1 - p would collapse to 1
    for (double p : {1e-12, 1e-30, 1e-100, 1e-300}) {
        double x = std_normal_quantile(p);
        CHECK(x < 0.0);
        CHECK(std_normal_cdf(x) == doctest::Approx(p).scale(0.0).epsilon(1e-9));
    }
}

TEST_CASE("quantile rejects probabilities outside (0,1)") {
    CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(-0.1), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.1), std::domain_error);
}
