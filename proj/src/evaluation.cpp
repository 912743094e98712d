#include "mosum/evaluation.hpp"

#include "mosum/error.hpp"
#include "mosum/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <omp.h>

namespace mosum {

namespace {

// max over a of min over b of |a - b| * dt
double directed_distance(std::span<const std::size_t> from, std::span<const std::size_t> to, double dt) {
    double worst = 0.0;
    for (std::size_t a : from) {
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (std::size_t b : to) {
            best = std::min(best, a > b ? a - b : b - a);
        }
        worst = std::max(worst, static_cast<double>(best) * dt);
    }
    return worst;
}

} // namespace

ScoreTriple score(std::span<const std::size_t> truth, std::span<const std::size_t> estimate, const TimeGrid& grid) {
    ScoreTriple s;
    s.count_score = truth.size() > estimate.size() ? truth.size() - estimate.size() : estimate.size() - truth.size();
    if (truth.empty() && estimate.empty()) {
        return s;
    }
    if (estimate.empty()) {
        s.max_score1 = grid.span();
    } else if (truth.empty()) {
        s.max_score2 = grid.span();
    } else {
        s.max_score1 = directed_distance(truth, estimate, grid.delta_t());
        s.max_score2 = directed_distance(estimate, truth, grid.delta_t());
    }
    s.hausdorff = std::max(s.max_score1, s.max_score2);
    return s;
}

Aggregate aggregate(std::span<const double> values) {
    Aggregate a;
    if (values.empty()) {
        return a;
    }
    const double r = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    a.mean = sum / r;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - a.mean) * (v - a.mean);
        }
        a.se = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
    }
    return a;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    if (config.replications < 1) {
        throw InputError("benchmark needs at least one replication");
    }
    const std::vector<std::size_t> truth = scenario_changes(config.scenario);
    const TimeGrid grid(kScenarioLength, kScenarioDeltaT);
    // validate the detector configuration once, outside the parallel loop
    for (std::size_t g : resolve_bandwidths(config.method, grid.n())) {
        check_profile_bandwidth(grid.n(), g);
        (void)critical_value(grid.n(), g, config.method.alpha, config.method.log_h);
    }

    BenchmarkReport report;
    report.config = config;
    const auto reps = static_cast<std::ptrdiff_t>(config.replications);
    for (std::size_t level = 0; level < config.sigma_levels.size(); ++level) {
        const NoiseSpec noise{config.noise, config.sigma_levels[level]};
        std::vector<double> counts(config.replications);
        std::vector<double> max1(config.replications);
        std::vector<double> max2(config.replications);
        std::vector<double> millis(config.replications);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t r = 0; r < reps; ++r) {
            const auto idx = static_cast<std::size_t>(r);
            const ScenarioDraw draw =
                gen_scenario({config.scenario, noise, config.seed, stream_id(level, idx)});
            const auto start = std::chrono::steady_clock::now();
            const DetectionResult result = detect(draw.series, config.method);
            const auto stop = std::chrono::steady_clock::now();
            const ScoreTriple s = score(truth, result.indices(), grid);
            counts[idx] = static_cast<double>(s.count_score);
            max1[idx] = s.max_score1;
            max2[idx] = s.max_score2;
            millis[idx] = std::chrono::duration<double, std::milli>(stop - start).count();
        }
        BenchmarkRow row;
        row.sigma_eps = noise.sigma_eps;
        row.count = aggregate(counts);
        row.max1 = aggregate(max1);
        row.max2 = aggregate(max2);
        for (double ms : millis) {
            row.total_ms += ms;
        }
        row.mean_ms = row.total_ms / static_cast<double>(config.replications);
        report.rows.push_back(row);
    }
    return report;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "scenario,noise,sigma_eps,replications,count_mean,count_se,max1_mean,max1_se,max2_mean,max2_se\n";
    for (const auto& row : report.rows) {
        out << static_cast<int>(report.config.scenario) << ',' << to_string(report.config.noise) << ','
            << format_double(row.sigma_eps) << ',' << report.config.replications << ','
            << format_double(row.count.mean) << ',' << format_double(row.count.se) << ','
            << format_double(row.max1.mean) << ',' << format_double(row.max1.se) << ','
            << format_double(row.max2.mean) << ',' << format_double(row.max2.se) << '\n';
    }
}

void print_report_table(std::ostream& out, const BenchmarkReport& report, bool color) {
    const char* bold = color ? "\033[1m" : "";
    const char* reset = color ? "\033[0m" : "";
    char buf[160];
    out << bold << "Simulation " << static_cast<int>(report.config.scenario) << ", "
        << to_string(report.config.noise) << " noise, " << report.config.replications << " replications" << reset
        << '\n';
    std::snprintf(buf, sizeof buf, "%8s  %-18s %-18s %-18s %10s\n", "sigma", "COUNTscore", "MAXscore1", "MAXscore2",
                  "ms/rep");
    out << buf;
    auto cell = [](const Aggregate& a) {
        char c[40];
        std::snprintf(c, sizeof c, "%.3f (%.4f)", a.mean, a.se);
        return std::string(c);
    };
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%8.3g  %-18s %-18s %-18s %10.3f\n", row.sigma_eps, cell(row.count).c_str(),
                      cell(row.max1).c_str(), cell(row.max2).c_str(), row.mean_ms);
        out << buf;
    }
}

} // namespace mosum
