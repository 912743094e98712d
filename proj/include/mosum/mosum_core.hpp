#pragma once

#include "mosum/large_buffer.hpp"
#include "mosum/signal_model.hpp"
#include "mosum/small_matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mosum {

inline constexpr double kDefaultClampFloor = 1e-12;

/// Observed values X_1..X_n on a time grid. Values are finite.
class Series {
public:
    explicit Series(std::vector<double> values, TimeGrid grid);
    /// Grid with n = values.size().
    explicit Series(std::vector<double> values, double delta_t = 1.0);

    const std::vector<double>& values() const noexcept { return values_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    /// X_i for 1-based i.
    double operator[](std::size_t i) const { return values_[i - 1]; }

private:
    void validate() const;

    std::vector<double> values_;
    TimeGrid grid_;
};

enum class WindowSide {
    plus,  ///< I+(k) = {k+1, ..., k+G}
    minus, ///< I-(k) = {k-G+1, ..., k}
};

struct LocalVariance {
    double sigma2_plus = 0.0;
    double sigma2_minus = 0.0;
    double sigma2 = 0.0;
};

/// Both window fits at one index k together with the local variance and
/// the Wald statistic W_{k,n}(G).
struct WindowFit {
    std::size_t k = 0;
    Vec2 beta_plus{};
    Vec2 beta_minus{};
    double sigma2_plus = 0.0;
    double sigma2_minus = 0.0;
    double sigma2 = 0.0;
    double w = 0.0;
};

/// O(1) window least squares of X_i on (1, (i-k)/G) backed by compensated
/// prefix sums of X_i, i*X_i and X_i^2.
class WindowRegression {
public:
    explicit WindowRegression(std::span<const double> values);
    explicit WindowRegression(const Series& series) : WindowRegression(series.values()) {}

    std::size_t size() const noexcept { return n_; }

    Vec2 ols(std::size_t k, std::size_t bandwidth, WindowSide side) const;
    LocalVariance local_variance(std::size_t k, std::size_t bandwidth) const;
    WindowFit fit(std::size_t k, std::size_t bandwidth, double clamp_floor = kDefaultClampFloor,
                  std::optional<double> fixed_sigma = std::nullopt) const;

private:
    struct WindowMoments {
        double sum;          // sum of X
        double weighted_sum; // sum of j * X_{first+j}, j = 1..G
        double sum_sq;       // sum of X^2
    };
    struct SideFit {
        Vec2 beta;
        double rss;
    };

    WindowMoments moments(std::size_t first, std::size_t bandwidth) const;
    SideFit side_fit(std::size_t k, std::size_t bandwidth, WindowSide side) const;
    void check_window(std::size_t k, std::size_t bandwidth, WindowSide side) const;

    // Prefix sums up to index i, each kept as an unevaluated hi + lo pair.
    // Interleaved so one window lookup touches two contiguous records.
    struct Prefix {
        double sum_hi, sum_lo;
        double isum_hi, isum_lo;
        double sq_hi, sq_lo;
    };

    std::size_t n_;
    large_vector<Prefix> prefix_;
};

Vec2 window_ols(const Series& series, std::size_t k, std::size_t bandwidth, WindowSide side);
LocalVariance local_variance(const Series& series, std::size_t k, std::size_t bandwidth);

/// W = sqrt(G)/sigma * sqrt(d0^2/8 + d1^2/24), d = beta_plus - beta_minus.
/// sigma2 <= clamp_floor is replaced by clamp_floor; a zero difference gives 0.
double mosum_statistic(const Vec2& beta_plus, const Vec2& beta_minus, double sigma2,
                       std::size_t bandwidth, double clamp_floor = kDefaultClampFloor);

struct ProfileOptions {
    double clamp_floor = kDefaultClampFloor;
    /// Replaces the local estimator with a known sigma (used for calibration).
    std::optional<double> fixed_sigma;
};

/// WindowFits for k = G..n-G.
struct MosumProfile {
    std::size_t bandwidth = 0;
    double clamp_floor = kDefaultClampFloor;
    large_vector<WindowFit> fits;

    std::size_t first_k() const noexcept { return bandwidth; }
    std::size_t last_k() const noexcept { return bandwidth + fits.size() - 1; }
    bool empty() const noexcept { return fits.empty(); }
    const WindowFit& at(std::size_t k) const { return fits.at(k - bandwidth); }
    double max_statistic() const;
    std::vector<double> statistics() const;
};

/// OpenMP kernel. Output does not depend on the thread count.
MosumProfile mosum_profile(const WindowRegression& regression, std::size_t bandwidth,
                           const ProfileOptions& options = {});
MosumProfile mosum_profile(const Series& series, std::size_t bandwidth, const ProfileOptions& options = {});

/// Single-threaded reference for the same computation.
MosumProfile mosum_profile_serial(const WindowRegression& regression, std::size_t bandwidth,
                                  const ProfileOptions& options = {});
MosumProfile mosum_profile_serial(const Series& series, std::size_t bandwidth,
                                  const ProfileOptions& options = {});

/// Throws InputError unless 3 <= G and 2G < n.
void check_profile_bandwidth(std::size_t n, std::size_t bandwidth);

/// Lag-h covariance of the limiting Gaussian process Z(t):
/// [[Cov(Z0(t),Z0(t+h)), Cov(Z0(t),Z1(t+h))], [Cov(Z1(t),Z0(t+h)), Cov(Z1(t),Z1(t+h))]].
Mat2 theoretical_Z_covariance(double h);

} // namespace mosum
