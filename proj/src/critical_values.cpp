#include "mosum/critical_values.hpp"

#include "mosum/error.hpp"
#include "mosum/mosum_core.hpp"
#include "mosum/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <omp.h>

namespace mosum {

double gumbel2_cdf(double z) { return std::exp(-2.0 * std::exp(-z)); }

double gumbel2_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("Gumbel quantile needs 0 < p < 1");
    }
    return -std::log(-std::log(p) / 2.0);
}

namespace {

double log_ratio(std::size_t n, std::size_t bandwidth) {
    if (bandwidth == 0) {
        throw InputError("bandwidth must be positive");
    }
    const double ratio = static_cast<double>(n) / static_cast<double>(bandwidth);
    if (!(ratio > std::numbers::e)) {
        throw InputError("critical value needs n/G > e (got n = " + std::to_string(n) + ", G = " +
                         std::to_string(bandwidth) + ")");
    }
    return std::log(ratio);
}

} // namespace

CriticalValueSpec critical_value(std::size_t n, std::size_t bandwidth, double alpha, double log_h) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("significance level alpha must lie in (0, 1)");
    }
    const double l = log_ratio(n, bandwidth);
    CriticalValueSpec spec;
    spec.n = n;
    spec.bandwidth = bandwidth;
    spec.alpha = alpha;
    spec.log_h = log_h;
    spec.a_g = std::sqrt(2.0 * l);
    spec.b_g = 2.0 * l + std::log(l) + log_h;
    spec.c_n = (spec.b_g - std::log(-std::log(1.0 - alpha) / 2.0)) / spec.a_g;
    return spec;
}

bool bandwidth_below_rate_hint(std::size_t n, std::size_t bandwidth) {
    return static_cast<double>(bandwidth) < std::pow(static_cast<double>(n), 2.0 / 3.0);
}

std::vector<double> calibration_statistics(std::size_t n, std::size_t bandwidth, std::size_t replications,
                                           std::uint64_t seed) {
    if (replications < 1) {
        throw InputError("calibration needs at least one replication");
    }
    check_profile_bandwidth(n, bandwidth);
    const double l = log_ratio(n, bandwidth);
    const double a_g = std::sqrt(2.0 * l);
    const double shift = 2.0 * l + std::log(l);

    ProfileOptions options;
    options.fixed_sigma = 1.0;

    std::vector<double> stats(replications);
    const auto count = static_cast<std::ptrdiff_t>(replications);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
        CounterRng rng(seed, static_cast<std::uint64_t>(r));
        std::vector<double> x(n);
        for (auto& v : x) {
            v = rng.normal();
        }
        const MosumProfile profile = mosum_profile_serial(WindowRegression(x), bandwidth, options);
        stats[static_cast<std::size_t>(r)] = a_g * profile.max_statistic() - shift;
    }
    return stats;
}

double calibrate_log_h(std::size_t n, std::size_t bandwidth, std::size_t replications, std::uint64_t seed) {
    if (replications < 100) {
        throw InputError("calibration needs at least 100 replications");
    }
    std::vector<double> stats = calibration_statistics(n, bandwidth, replications, seed);
    // lower median
    const auto mid = stats.begin() + static_cast<std::ptrdiff_t>((stats.size() - 1) / 2);
    std::nth_element(stats.begin(), mid, stats.end());
    return *mid - gumbel2_quantile(0.5);
}

} // namespace mosum
