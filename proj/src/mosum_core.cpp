#include "mosum/mosum_core.hpp"

#include "mosum/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <omp.h>

namespace mosum {

namespace {

// Below this many fits the OpenMP fork/join costs more than it saves.
constexpr std::ptrdiff_t kParallelThreshold = 16384;

// Knuth's error-free sum: a + b == s + err exactly.
inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
}

} // namespace

Series::Series(std::vector<double> values, TimeGrid grid) : values_(std::move(values)), grid_(grid) {
    validate();
}

Series::Series(std::vector<double> values, double delta_t)
    : values_(std::move(values)), grid_(std::max<std::size_t>(values_.size(), 1), delta_t) {
    validate();
}

void Series::validate() const {
    if (values_.size() != grid_.n()) {
        throw InputError("series length " + std::to_string(values_.size()) + " does not match grid n = " +
                         std::to_string(grid_.n()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InputError("series value at index " + std::to_string(i + 1) + " is not finite");
        }
    }
}

WindowRegression::WindowRegression(std::span<const double> values) : n_(values.size()), prefix_(values.size() + 1) {
    // running sums s* with accumulated rounding errors c*
    double s1 = 0.0, c1 = 0.0;
    double si = 0.0, ci = 0.0;
    double sq = 0.0, cq = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double x = values[i];
        double err = 0.0;
        two_sum(s1, x, s1, err);
        c1 += err;
        two_sum(si, static_cast<double>(i + 1) * x, si, err);
        ci += err;
        two_sum(sq, x * x, sq, err);
        cq += err;
        prefix_[i + 1] = Prefix{s1, c1, si, ci, sq, cq};
    }
}

WindowRegression::WindowMoments WindowRegression::moments(std::size_t first, std::size_t bandwidth) const {
    const std::size_t last = first + bandwidth;
    WindowMoments m{};
    const Prefix& a = prefix_[first];
    const Prefix& b = prefix_[last];
    m.sum = (b.sum_hi - a.sum_hi) + (b.sum_lo - a.sum_lo);
    m.weighted_sum = (b.isum_hi - a.isum_hi) + (b.isum_lo - a.isum_lo) - static_cast<double>(first) * m.sum;
    m.sum_sq = (b.sq_hi - a.sq_hi) + (b.sq_lo - a.sq_lo);
    return m;
}

void WindowRegression::check_window(std::size_t k, std::size_t bandwidth, WindowSide side) const {
    if (bandwidth < 2) {
        throw InputError("window regression needs G >= 2");
    }
    if (side == WindowSide::plus ? k + bandwidth > n_ : k < bandwidth || k > n_) {
        throw InputError("window at k = " + std::to_string(k) + " with G = " + std::to_string(bandwidth) +
                         " falls outside [1, " + std::to_string(n_) + "]");
    }
}

// Regressor x_i = (i - k)/G. Over the window x = (j + offset)/G for
// j = 1..G (offset 0 on the plus side, -G on the minus side), so with
// c = (G+1)/2 the centred cross product is sum (j - c) X / G and the
// regressor sum of squares is (G^2 - 1) / (12 G).
WindowRegression::SideFit WindowRegression::side_fit(std::size_t k, std::size_t bandwidth, WindowSide side) const {
    const std::size_t first = side == WindowSide::plus ? k : k - bandwidth;
    const WindowMoments m = moments(first, bandwidth);
    const double g = static_cast<double>(bandwidth);
    const double centre = 0.5 * (g + 1.0);
    const double cross = m.weighted_sum - centre * m.sum; // sum (j - c) X
    const double slope = 12.0 * cross / (g * g - 1.0);
    const double mean = m.sum / g;
    const double x_mean = side == WindowSide::plus ? centre / g : (centre - g) / g;

    SideFit f;
    f.beta = {mean - slope * x_mean, slope};
    const double centred_ss = m.sum_sq - m.sum * mean;
    f.rss = std::max(0.0, centred_ss - slope * cross / g);
    return f;
}

Vec2 WindowRegression::ols(std::size_t k, std::size_t bandwidth, WindowSide side) const {
    check_window(k, bandwidth, side);
    return side_fit(k, bandwidth, side).beta;
}

LocalVariance WindowRegression::local_variance(std::size_t k, std::size_t bandwidth) const {
    if (bandwidth < 3) {
        throw InputError("local variance needs G >= 3 (denominator G - 2)");
    }
    check_window(k, bandwidth, WindowSide::plus);
    check_window(k, bandwidth, WindowSide::minus);
    const double denom = static_cast<double>(bandwidth) - 2.0;
    LocalVariance v;
    v.sigma2_plus = side_fit(k, bandwidth, WindowSide::plus).rss / denom;
    v.sigma2_minus = side_fit(k, bandwidth, WindowSide::minus).rss / denom;
    v.sigma2 = 0.5 * (v.sigma2_plus + v.sigma2_minus);
    return v;
}

namespace {

WindowFit assemble_fit(std::size_t k, std::size_t bandwidth, const Vec2& beta_plus, double rss_plus,
                       const Vec2& beta_minus, double rss_minus, double clamp_floor,
                       const std::optional<double>& fixed_sigma) {
    const double denom = static_cast<double>(bandwidth) - 2.0;
    WindowFit f;
    f.k = k;
    f.beta_plus = beta_plus;
    f.beta_minus = beta_minus;
    f.sigma2_plus = rss_plus / denom;
    f.sigma2_minus = rss_minus / denom;
    f.sigma2 = 0.5 * (f.sigma2_plus + f.sigma2_minus);
    const double s2 = fixed_sigma ? *fixed_sigma * *fixed_sigma : f.sigma2;
    f.w = mosum_statistic(beta_plus, beta_minus, s2, bandwidth, clamp_floor);
    return f;
}

} // namespace

WindowFit WindowRegression::fit(std::size_t k, std::size_t bandwidth, double clamp_floor,
                                std::optional<double> fixed_sigma) const {
    if (bandwidth < 3) {
        throw InputError("window fit needs G >= 3");
    }
    check_window(k, bandwidth, WindowSide::plus);
    check_window(k, bandwidth, WindowSide::minus);
    const SideFit p = side_fit(k, bandwidth, WindowSide::plus);
    const SideFit m = side_fit(k, bandwidth, WindowSide::minus);
    return assemble_fit(k, bandwidth, p.beta, p.rss, m.beta, m.rss, clamp_floor, fixed_sigma);
}

Vec2 window_ols(const Series& series, std::size_t k, std::size_t bandwidth, WindowSide side) {
    return WindowRegression(series).ols(k, bandwidth, side);
}

LocalVariance local_variance(const Series& series, std::size_t k, std::size_t bandwidth) {
    return WindowRegression(series).local_variance(k, bandwidth);
}

double mosum_statistic(const Vec2& beta_plus, const Vec2& beta_minus, double sigma2, std::size_t bandwidth,
                       double clamp_floor) {
    const Vec2 d = beta_plus - beta_minus;
    if (d[0] == 0.0 && d[1] == 0.0) {
        return 0.0;
    }
    const double s2 = sigma2 <= clamp_floor ? clamp_floor : sigma2;
    return std::sqrt(static_cast<double>(bandwidth) / s2) * std::sqrt(d[0] * d[0] / 8.0 + d[1] * d[1] / 24.0);
}

double MosumProfile::max_statistic() const {
    double best = 0.0;
    for (const auto& f : fits) {
        best = std::max(best, f.w);
    }
    return best;
}

std::vector<double> MosumProfile::statistics() const {
    std::vector<double> w(fits.size());
    std::transform(fits.begin(), fits.end(), w.begin(), [](const WindowFit& f) { return f.w; });
    return w;
}

void check_profile_bandwidth(std::size_t n, std::size_t bandwidth) {
    if (bandwidth < 3) {
        throw InputError("bandwidth G = " + std::to_string(bandwidth) + " is too small (need G >= 3)");
    }
    if (2 * bandwidth >= n) {
        throw InputError("bandwidth G = " + std::to_string(bandwidth) + " violates 2G < n (n = " +
                         std::to_string(n) + ")");
    }
}

namespace {

MosumProfile empty_profile(const WindowRegression& regression, std::size_t bandwidth, const ProfileOptions& options) {
    check_profile_bandwidth(regression.size(), bandwidth);
    MosumProfile profile;
    profile.bandwidth = bandwidth;
    profile.clamp_floor = options.clamp_floor;
    profile.fits.resize(regression.size() - 2 * bandwidth + 1);
    return profile;
}

} // namespace

MosumProfile mosum_profile(const WindowRegression& regression, std::size_t bandwidth, const ProfileOptions& options) {
    MosumProfile profile = empty_profile(regression, bandwidth, options);
    const auto count = static_cast<std::ptrdiff_t>(profile.fits.size());
    WindowFit* out = profile.fits.data();
#pragma omp parallel for schedule(static) if (count >= kParallelThreshold)
    for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
        out[idx] = regression.fit(bandwidth + static_cast<std::size_t>(idx), bandwidth, options.clamp_floor,
                                  options.fixed_sigma);
    }
    return profile;
}

MosumProfile mosum_profile(const Series& series, std::size_t bandwidth, const ProfileOptions& options) {
    check_profile_bandwidth(series.size(), bandwidth);
    return mosum_profile(WindowRegression(series), bandwidth, options);
}

MosumProfile mosum_profile_serial(const WindowRegression& regression, std::size_t bandwidth,
                                  const ProfileOptions& options) {
    MosumProfile profile = empty_profile(regression, bandwidth, options);
    for (std::size_t idx = 0; idx < profile.fits.size(); ++idx) {
        profile.fits[idx] = regression.fit(bandwidth + idx, bandwidth, options.clamp_floor, options.fixed_sigma);
    }
    return profile;
}

MosumProfile mosum_profile_serial(const Series& series, std::size_t bandwidth, const ProfileOptions& options) {
    check_profile_bandwidth(series.size(), bandwidth);
    return mosum_profile_serial(WindowRegression(series), bandwidth, options);
}

namespace {

double cov_z0z0(double h) {
    const double a = std::abs(h);
    if (a < 1.0) {
        return 1.0 - 4.5 * a + 3.0 * a * a + 0.75 * a * a * a;
    }
    if (a < 2.0) {
        return -1.0 + 3.5 * a - 3.0 * a * a + 0.75 * a * a * a;
    }
    return 0.0;
}

double cov_z1z1(double h) {
    const double a = std::abs(h);
    if (a < 1.0) {
        return 1.0 - 1.5 * a - 3.0 * a * a + 3.0 * a * a * a;
    }
    if (a < 2.0) {
        return -1.0 - 1.5 * a + 3.0 * a * a - a * a * a;
    }
    return 0.0;
}

// Cov(Z0(t), Z1(t + h)).
double cov_z0z1(double h) {
    const double r3 = std::sqrt(3.0);
    const double h2 = h * h;
    const double h3 = h2 * h;
    if (h >= 0.0 && h < 1.0) {
        return r3 * (-1.5 * h + 2.25 * h2 - 0.5 * h3);
    }
    if (h >= 1.0 && h < 2.0) {
        return r3 * (1.5 * h - 1.75 * h2 + 0.5 * h3);
    }
    if (h > -1.0 && h < 0.0) {
        return r3 * (-1.5 * h - 2.25 * h2 - 0.5 * h3);
    }
    if (h > -2.0 && h <= -1.0) {
        return r3 * (1.5 * h + 1.75 * h2 + 0.5 * h3);
    }
    return 0.0;
}

} // namespace

Mat2 theoretical_Z_covariance(double h) {
    return {{{cov_z0z0(h), cov_z0z1(h)}, {cov_z0z1(-h), cov_z1z1(h)}}};
}

} // namespace mosum
