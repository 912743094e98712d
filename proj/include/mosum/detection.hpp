#pragma once

#include "mosum/critical_values.hpp"
#include "mosum/mosum_core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mosum {

/// Maximal run [v, w] of W >= c with its argmax.
struct ExceedanceInterval {
    std::size_t v = 0;
    std::size_t w = 0;
    std::size_t peak_k = 0;
    double peak_w = 0.0;
};

struct CandidateSet {
    std::size_t bandwidth = 0;
    std::vector<ExceedanceInterval> estimates; ///< sorted by peak_k
    double bic = 0.0;

    std::vector<std::size_t> peaks() const;
};

struct ChangePoint {
    std::size_t k = 0;
    double t = 0.0;
    std::size_t source_bandwidth = 0;
    double peak_w = 0.0;
};

struct DetectionParams {
    double alpha = 0.05;
    double eta = 0.3;
    double theta = 0.8;
    double log_h = kDefaultLogH;
    std::vector<std::size_t> bandwidths;
};

struct DetectionResult {
    std::vector<ChangePoint> change_points; ///< strictly increasing k
    DetectionParams params;

    std::vector<std::size_t> indices() const;
};

/// Runs of W >= c of span w - v >= eta*G, peak at the first argmax.
/// Indices outside [G, n-G] count as below threshold.
CandidateSet detect_single(const MosumProfile& profile, double critical, double eta);

/// Sum of squared residuals of per-segment OLS fits of X on (1, t_i).
/// Returns +infinity if a segment has fewer than 3 points.
double segment_rss(const Series& series, std::span<const std::size_t> change_points);

/// n log(RSS/n) + 2(|K|+1) log n, RSS floored at n * 1e-18; +infinity if infeasible.
double bic(const Series& series, std::span<const std::size_t> change_points);

/// Fibonacci bandwidths starting at g1, g1 and kept while below n / log10(n).
std::vector<std::size_t> fibonacci_bandwidths(std::size_t g1, std::size_t n);

/// BIC-ordered merge. Sets are ranked by ascending BIC (ties: smaller G);
/// the best set is accepted whole, later estimates only if farther than
/// theta * G from every accepted one.
DetectionResult multiscale_merge(std::vector<CandidateSet> sets, const Series& series, double theta);

struct DetectorConfig {
    /// Explicit bandwidths; when empty, fibonacci_bandwidths(g1, n) is used.
    std::vector<std::size_t> bandwidths;
    std::size_t g1 = 50;
    double alpha = 0.05;
    double eta = 0.3;
    double theta = 0.8;
    double log_h = kDefaultLogH;
    double clamp_floor = kDefaultClampFloor;
};

std::vector<std::size_t> resolve_bandwidths(const DetectorConfig& config, std::size_t n);

/// Full pipeline: profile, critical value and eta-rule per bandwidth, then merge.
DetectionResult detect(const Series& series, const DetectorConfig& config);

} // namespace mosum
