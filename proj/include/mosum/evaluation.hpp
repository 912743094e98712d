#pragma once

#include "mosum/detection.hpp"
#include "mosum/signal_model.hpp"
#include "mosum/simulation.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mosum {

/// Distances are in time units. With an empty estimate set MAXscore1 is the
/// full span T (MAXscore2 = 0), and symmetrically for an empty truth set.
struct ScoreTriple {
    std::size_t count_score = 0;
    double max_score1 = 0.0;
    double max_score2 = 0.0;
    double hausdorff = 0.0;
};

ScoreTriple score(std::span<const std::size_t> truth, std::span<const std::size_t> estimate,
                  const TimeGrid& grid);

struct Aggregate {
    double mean = 0.0;
    double se = 0.0; ///< sample SD / sqrt(R)
};

Aggregate aggregate(std::span<const double> values);

struct BenchmarkConfig {
    ScenarioId scenario = ScenarioId::sim1;
    NoiseFamily noise = NoiseFamily::gaussian;
    std::vector<double> sigma_levels{0.5, 1.0, 1.5, 2.0};
    std::size_t replications = 1000;
    std::uint64_t seed = 0;
    DetectorConfig method;
};

struct BenchmarkRow {
    double sigma_eps = 0.0;
    Aggregate count;
    Aggregate max1;
    Aggregate max2;
    double total_ms = 0.0;
    double mean_ms = 0.0;
};

struct BenchmarkReport {
    BenchmarkConfig config;
    std::vector<BenchmarkRow> rows;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& config);

void write_report_csv(std::ostream& out, const BenchmarkReport& report);
void print_report_table(std::ostream& out, const BenchmarkReport& report, bool color = false);

} // namespace mosum
