#include "mosum/critical_values.hpp"
#include "mosum/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace mosum;

TEST_CASE("Gumbel type distribution with two tails") {
    CHECK(gumbel2_quantile(0.5) == doctest::Approx(1.05966010114160964).epsilon(1e-14));
    CHECK(gumbel2_quantile(0.5) == doctest::Approx(-std::log(std::log(2.0) / 2.0)).epsilon(1e-15));
    for (double p = 0.001; p < 1.0; p += 0.0137) {
        CHECK(std::abs(gumbel2_cdf(gumbel2_quantile(p)) - p) <= 1e-12);
    }
    CHECK(std::abs(gumbel2_cdf(gumbel2_quantile(0.95)) - 0.95) <= 1e-12);
    double prev = -INFINITY;
    for (double p = 0.01; p < 1.0; p += 0.01) {
        const double q = gumbel2_quantile(p);
        CHECK(q > prev);
        prev = q;
    }
    CHECK_THROWS_AS(gumbel2_quantile(0.0), InputError);
    CHECK_THROWS_AS(gumbel2_quantile(1.0), InputError);
    CHECK_THROWS_AS(gumbel2_quantile(-0.2), InputError);
    CHECK_THROWS_AS(gumbel2_quantile(NAN), InputError);
}

TEST_CASE("critical value closed form") {
    const CriticalValueSpec cv = critical_value(3500, 200, 0.05);
    CHECK(cv.log_h == kDefaultLogH);
    CHECK(cv.a_g == doctest::Approx(2.39257220619544453).epsilon(1e-14));
    CHECK(cv.b_g == doctest::Approx(7.50439262953407014).epsilon(1e-14));
    CHECK(cv.c_n == doctest::Approx(4.66766897576503471).epsilon(1e-14));
    CHECK(cv.n == 3500);
    CHECK(cv.bandwidth == 200);
    CHECK(critical_value(3500, 200, 0.05, 0.5).c_n < cv.c_n);
}

TEST_CASE("critical value decreases in alpha") {
    double prev = INFINITY;
    for (double alpha = 0.001; alpha < 0.999; alpha += 0.01) {
        const double c = critical_value(100000, 1000, alpha).c_n;
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("critical value argument errors") {
    CHECK_THROWS_AS(critical_value(3500, 200, 0.0), InputError);
    CHECK_THROWS_AS(critical_value(3500, 200, 1.0), InputError);
    // n/G = 2.5 < e
    try {
        critical_value(500, 200, 0.05);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("n/G > e") != std::string::npos);
    }
    CHECK_NOTHROW(critical_value(544, 200, 0.05));
    CHECK_THROWS_AS(critical_value(543, 200, 0.05), InputError);
}

TEST_CASE("bandwidth rate hint") {
    // 1e6^{2/3} = 1e4
    CHECK(bandwidth_below_rate_hint(1000000, 9999));
    CHECK_FALSE(bandwidth_below_rate_hint(1000000, 10001));
    CHECK(bandwidth_below_rate_hint(3500, 200));
}

TEST_CASE("calibration is reproducible and validates its inputs") {
    const auto a = calibration_statistics(5000, 100, 120, 7);
    const auto b = calibration_statistics(5000, 100, 120, 7);
    const auto c = calibration_statistics(5000, 100, 120, 8);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.size() == 120);
    const double h1 = calibrate_log_h(5000, 100, 120, 7);
    const double h2 = calibrate_log_h(5000, 100, 120, 7);
    CHECK(h1 == h2);
    CHECK(std::isfinite(h1));
    CHECK_THROWS_AS(calibrate_log_h(5000, 100, 99, 7), InputError);
    CHECK_THROWS_AS(calibrate_log_h(250, 100, 200, 7), InputError);
}

TEST_CASE("calibrated constant uses the lower median") {
    const auto stats = calibration_statistics(5000, 100, 120, 11);
    std::vector<double> sorted(stats);
    std::sort(sorted.begin(), sorted.end());
    CHECK(calibrate_log_h(5000, 100, 120, 11) == sorted[59] - gumbel2_quantile(0.5));
}
