#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mosum {

inline constexpr double kDefaultLogH = 0.7284;

/// Pr(Gamma_2 <= z) = exp(-2 exp(-z)).
double gumbel2_cdf(double z);
double gumbel2_quantile(double p);

struct CriticalValueSpec {
    std::size_t n = 0;
    std::size_t bandwidth = 0;
    double alpha = 0.05;
    double log_h = kDefaultLogH;
    double a_g = 0.0;
    double b_g = 0.0;
    double c_n = 0.0;
};

/// Requires n/G > e and 0 < alpha < 1.
CriticalValueSpec critical_value(std::size_t n, std::size_t bandwidth, double alpha,
                                 double log_h = kDefaultLogH);

/// True when G < n^{2/3}, where the asymptotic level guarantee is doubtful.
bool bandwidth_below_rate_hint(std::size_t n, std::size_t bandwidth);

/// Per-replication a_G max_k W - 2 log(n/G) - log log(n/G) on N(0,1) data
/// with sigma fixed to 1. Replication r uses RNG stream (seed, r).
std::vector<double> calibration_statistics(std::size_t n, std::size_t bandwidth, std::size_t replications,
                                           std::uint64_t seed);

/// Lower median of calibration_statistics minus the Gamma_2 median.
double calibrate_log_h(std::size_t n, std::size_t bandwidth, std::size_t replications, std::uint64_t seed);

} // namespace mosum
