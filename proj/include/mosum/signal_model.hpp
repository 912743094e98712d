#pragma once

#include "mosum/small_matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mosum {

/// Equispaced observation times t_i = i * delta_t for i = 1..n.
class TimeGrid {
public:
    TimeGrid(std::size_t n, double delta_t);

    std::size_t n() const noexcept { return n_; }
    double delta_t() const noexcept { return delta_t_; }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) * delta_t_; }
    /// Observation period T = n * delta_t.
    double span() const noexcept { return time(n_); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    std::size_t n_;
    double delta_t_;
};

/// One linear piece a0 + a1 * t.
struct Segment {
    double a0 = 0.0;
    double a1 = 0.0;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise-linear ground truth. Change index k_j is the last index of
/// segment j: index i belongs to segment j iff k_{j-1} < i <= k_j.
class PiecewiseLinearSignal {
public:
    PiecewiseLinearSignal(TimeGrid grid, std::vector<std::size_t> change_indices,
                          std::vector<Segment> segments);

    const TimeGrid& grid() const noexcept { return grid_; }
    const std::vector<std::size_t>& change_indices() const noexcept { return changes_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    std::size_t num_changes() const noexcept { return changes_.size(); }

    /// Zero-based segment holding observation i (1-based).
    std::size_t segment_of(std::size_t i) const;

    /// f_1..f_n.
    std::vector<double> sample() const;

private:
    TimeGrid grid_;
    std::vector<std::size_t> changes_;
    std::vector<Segment> segments_;
};

/// f_i for 1 <= i <= n.
double evaluate_signal(const PiecewiseLinearSignal& sig, std::size_t i);

struct ChangeMagnitudes {
    double delta0 = 0.0; ///< jump size at t_{k_j}
    double delta1 = 0.0; ///< G * dt * (a1_j - a1_{j+1})
    double d = 0.0;      ///< |delta0 + delta1 / G|
};

/// Magnitudes of the j-th change (1-based), using the before-minus-after sign.
ChangeMagnitudes change_magnitudes(const PiecewiseLinearSignal& sig, std::size_t j, std::size_t bandwidth);

enum class DriftSide { before, after };

// Exact noiseless drift of beta_plus(k) - beta_minus(k) near a change k_j:
//   (A(kappa) + O_G(kappa)) * Delta_j,   kappa = |k - k_j| / G,
// with Delta_j taken as after-minus-before. `before` covers k <= k_j and
// `after` covers k > k_j. Only |kappa| enters the matrices.
Mat2 drift_matrix_a(double kappa, DriftSide side);
Mat2 drift_matrix_og(double kappa, std::size_t bandwidth, DriftSide side);

/// Large-G drift curve delta_j(kappa) for signed kappa = (k - k_j) / G.
Vec2 delta_curve(const Vec2& change, double kappa);

/// sqrt(delta' diag(1, 1/3) delta) for delta = delta_curve(change, kappa).
double g_curve(const Vec2& change, double kappa);

} // namespace mosum
