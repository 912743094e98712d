#include "mosum/detection.hpp"

#include "mosum/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mosum {

std::vector<std::size_t> CandidateSet::peaks() const {
    std::vector<std::size_t> out;
    out.reserve(estimates.size());
    for (const auto& e : estimates) {
        out.push_back(e.peak_k);
    }
    return out;
}

std::vector<std::size_t> DetectionResult::indices() const {
    std::vector<std::size_t> out;
    out.reserve(change_points.size());
    for (const auto& c : change_points) {
        out.push_back(c.k);
    }
    return out;
}

CandidateSet detect_single(const MosumProfile& profile, double critical, double eta) {
    if (!(eta > 0.0 && eta < 0.5)) {
        throw InputError("eta must lie in (0, 1/2)");
    }
    CandidateSet set;
    set.bandwidth = profile.bandwidth;
    // w - v >= eta * G over integers; the tolerance absorbs eta*G rounding up.
    const auto min_span = static_cast<std::size_t>(std::ceil(eta * static_cast<double>(profile.bandwidth) - 1e-9));

    bool in_run = false;
    ExceedanceInterval run;
    auto close_run = [&](std::size_t last_k) {
        run.w = last_k;
        if (run.w - run.v >= min_span) {
            set.estimates.push_back(run);
        }
        in_run = false;
    };

    for (const WindowFit& f : profile.fits) {
        if (f.w >= critical) {
            if (!in_run) {
                in_run = true;
                run = ExceedanceInterval{f.k, f.k, f.k, f.w};
            } else if (f.w > run.peak_w) {
                run.peak_k = f.k;
                run.peak_w = f.w;
            }
        } else if (in_run) {
            close_run(f.k - 1);
        }
    }
    if (in_run) {
        close_run(profile.last_k());
    }
    return set;
}

namespace {

void check_change_points(std::size_t n, std::span<const std::size_t> change_points) {
    for (std::size_t j = 0; j < change_points.size(); ++j) {
        if (change_points[j] == 0 || change_points[j] >= n) {
            throw InputError("change point " + std::to_string(change_points[j]) + " outside (0, n)");
        }
        if (j > 0 && change_points[j] <= change_points[j - 1]) {
            throw InputError("change points must be strictly increasing");
        }
    }
}

// Residual sum of squares of X on (1, t) over 1-based indices (first, last].
double line_rss(const Series& series, std::size_t first, std::size_t last) {
    const TimeGrid& grid = series.grid();
    const double m = static_cast<double>(last - first);
    double t_mean = 0.0;
    double x_mean = 0.0;
    for (std::size_t i = first + 1; i <= last; ++i) {
        t_mean += grid.time(i);
        x_mean += series[i];
    }
    t_mean /= m;
    x_mean /= m;
    double stt = 0.0;
    double stx = 0.0;
    for (std::size_t i = first + 1; i <= last; ++i) {
        const double dt = grid.time(i) - t_mean;
        stt += dt * dt;
        stx += dt * (series[i] - x_mean);
    }
    const double slope = stx / stt;
    double rss = 0.0;
    for (std::size_t i = first + 1; i <= last; ++i) {
        const double r = series[i] - x_mean - slope * (grid.time(i) - t_mean);
        rss += r * r;
    }
    return rss;
}

} // namespace

double segment_rss(const Series& series, std::span<const std::size_t> change_points) {
    const std::size_t n = series.size();
    check_change_points(n, change_points);
    std::size_t prev = 0;
    double rss = 0.0;
    for (std::size_t j = 0; j <= change_points.size(); ++j) {
        const std::size_t next = j < change_points.size() ? change_points[j] : n;
        if (next - prev < 3) {
            return std::numeric_limits<double>::infinity();
        }
        rss += line_rss(series, prev, next);
        prev = next;
    }
    return rss;
}

double bic(const Series& series, std::span<const std::size_t> change_points) {
    const double rss = segment_rss(series, change_points);
    if (std::isinf(rss)) {
        return rss;
    }
    const double n = static_cast<double>(series.size());
    const double floored = std::max(rss, n * 1e-18);
    return n * std::log(floored / n) + 2.0 * (static_cast<double>(change_points.size()) + 1.0) * std::log(n);
}

std::vector<std::size_t> fibonacci_bandwidths(std::size_t g1, std::size_t n) {
    if (g1 < 3) {
        throw InputError("initial bandwidth must be >= 3");
    }
    if (n <= 10) {
        throw InputError("Fibonacci bandwidths need n > 10");
    }
    const double bound = static_cast<double>(n) / std::log10(static_cast<double>(n));
    if (static_cast<double>(g1) >= bound) {
        throw InputError("initial bandwidth " + std::to_string(g1) + " is not below n/log10(n) = " +
                         std::to_string(bound));
    }
    std::vector<std::size_t> out{g1};
    std::size_t older = g1;
    std::size_t newer = g1;
    while (true) {
        const std::size_t next = older + newer;
        if (static_cast<double>(next) >= bound) {
            break;
        }
        out.push_back(next);
        older = newer;
        newer = next;
    }
    return out;
}

DetectionResult multiscale_merge(std::vector<CandidateSet> sets, const Series& series, double theta) {
    if (sets.empty()) {
        throw InputError("merge needs at least one candidate set");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw InputError("theta must lie in (0, 1]");
    }
    for (auto& s : sets) {
        s.bic = bic(series, s.peaks());
    }
    std::stable_sort(sets.begin(), sets.end(), [](const CandidateSet& a, const CandidateSet& b) {
        if (a.bic != b.bic) {
            return a.bic < b.bic;
        }
        return a.bandwidth < b.bandwidth;
    });

    const TimeGrid& grid = series.grid();
    DetectionResult result;
    result.params.theta = theta;
    auto& accepted = result.change_points;
    for (std::size_t b = 0; b < sets.size(); ++b) {
        const double radius = theta * static_cast<double>(sets[b].bandwidth);
        for (const auto& e : sets[b].estimates) {
            bool keep = true;
            if (b > 0) {
                for (const auto& a : accepted) {
                    const auto gap = e.peak_k > a.k ? e.peak_k - a.k : a.k - e.peak_k;
                    if (static_cast<double>(gap) <= radius) {
                        keep = false;
                        break;
                    }
                }
            }
            if (keep) {
                accepted.push_back({e.peak_k, grid.time(e.peak_k), sets[b].bandwidth, e.peak_w});
            }
        }
    }
    std::sort(accepted.begin(), accepted.end(), [](const ChangePoint& a, const ChangePoint& b) { return a.k < b.k; });

    for (const auto& s : sets) {
        result.params.bandwidths.push_back(s.bandwidth);
    }
    std::sort(result.params.bandwidths.begin(), result.params.bandwidths.end());
    return result;
}

std::vector<std::size_t> resolve_bandwidths(const DetectorConfig& config, std::size_t n) {
    if (config.bandwidths.empty()) {
        return fibonacci_bandwidths(config.g1, n);
    }
    std::vector<std::size_t> out = config.bandwidths;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DetectionResult detect(const Series& series, const DetectorConfig& config) {
    const std::size_t n = series.size();
    const std::vector<std::size_t> bandwidths = resolve_bandwidths(config, n);
    for (std::size_t g : bandwidths) {
        check_profile_bandwidth(n, g);
    }
    const WindowRegression regression(series);
    ProfileOptions options;
    options.clamp_floor = config.clamp_floor;

    std::vector<CandidateSet> sets;
    sets.reserve(bandwidths.size());
    for (std::size_t g : bandwidths) {
        const double c = critical_value(n, g, config.alpha, config.log_h).c_n;
        sets.push_back(detect_single(mosum_profile(regression, g, options), c, config.eta));
    }
    DetectionResult result = multiscale_merge(std::move(sets), series, config.theta);
    result.params.alpha = config.alpha;
    result.params.eta = config.eta;
    result.params.log_h = config.log_h;
    return result;
}

} // namespace mosum
