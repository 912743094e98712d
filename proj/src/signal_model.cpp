#include "mosum/signal_model.hpp"

#include "mosum/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mosum {

TimeGrid::TimeGrid(std::size_t n, double delta_t) : n_(n), delta_t_(delta_t) {
    if (n == 0) {
        throw InputError("time grid needs n >= 1");
    }
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
        throw InputError("time grid needs a positive finite delta_t");
    }
}

PiecewiseLinearSignal::PiecewiseLinearSignal(TimeGrid grid, std::vector<std::size_t> change_indices,
                                             std::vector<Segment> segments)
    : grid_(grid), changes_(std::move(change_indices)), segments_(std::move(segments)) {
    if (segments_.size() != changes_.size() + 1) {
        throw InputError("signal needs exactly one more segment than change points");
    }
    for (std::size_t j = 0; j < changes_.size(); ++j) {
        if (changes_[j] == 0 || changes_[j] >= grid_.n()) {
            throw InputError("change index " + std::to_string(changes_[j]) + " outside (0, n)");
        }
        if (j > 0 && changes_[j] <= changes_[j - 1]) {
            throw InputError("change indices must be strictly increasing");
        }
        if (segments_[j] == segments_[j + 1]) {
            throw InputError("adjacent segments " + std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                             " are identical");
        }
    }
    for (const auto& s : segments_) {
        if (!std::isfinite(s.a0) || !std::isfinite(s.a1)) {
            throw InputError("segment coefficients must be finite");
        }
    }
}

std::size_t PiecewiseLinearSignal::segment_of(std::size_t i) const {
    if (i < 1 || i > grid_.n()) {
        throw InputError("signal index " + std::to_string(i) + " outside [1, " + std::to_string(grid_.n()) + "]");
    }
    // number of change indices strictly below i
    return static_cast<std::size_t>(std::lower_bound(changes_.begin(), changes_.end(), i) - changes_.begin());
}

std::vector<double> PiecewiseLinearSignal::sample() const {
    std::vector<double> f(grid_.n());
    std::size_t seg = 0;
    for (std::size_t i = 1; i <= grid_.n(); ++i) {
        while (seg < changes_.size() && i > changes_[seg]) {
            ++seg;
        }
        f[i - 1] = segments_[seg].a0 + segments_[seg].a1 * grid_.time(i);
    }
    return f;
}

double evaluate_signal(const PiecewiseLinearSignal& sig, std::size_t i) {
    const Segment& s = sig.segments()[sig.segment_of(i)];
    return s.a0 + s.a1 * sig.grid().time(i);
}

ChangeMagnitudes change_magnitudes(const PiecewiseLinearSignal& sig, std::size_t j, std::size_t bandwidth) {
    if (j < 1 || j > sig.num_changes()) {
        throw InputError("change ordinal " + std::to_string(j) + " outside [1, " +
                         std::to_string(sig.num_changes()) + "]");
    }
    if (bandwidth < 1) {
        throw InputError("bandwidth must be >= 1");
    }
    const Segment& before = sig.segments()[j - 1];
    const Segment& after = sig.segments()[j];
    const double t_k = sig.grid().time(sig.change_indices()[j - 1]);
    const double slope_change = before.a1 - after.a1;
    const double g = static_cast<double>(bandwidth);

    ChangeMagnitudes m;
    m.delta0 = (before.a0 - after.a0) + slope_change * t_k;
    m.delta1 = g * sig.grid().delta_t() * slope_change;
    m.d = std::abs(m.delta0 + m.delta1 / g);
    return m;
}

namespace {

double checked_kappa(double kappa) {
    if (!(std::abs(kappa) <= 1.0)) {
        throw InputError("kappa must satisfy |kappa| <= 1");
    }
    return std::abs(kappa);
}

} // namespace

Mat2 drift_matrix_a(double kappa, DriftSide side) {
    const double q = checked_kappa(kappa);
    const double off = q * q - q;
    const Mat2 m = side == DriftSide::before
                       ? Mat2{{{1.0 - 3.0 * q, off}, {6.0 * q, -2.0 * q * q + q + 1.0}}}
                       : Mat2{{{1.0 - 3.0 * q, -off}, {-6.0 * q, -2.0 * q * q + q + 1.0}}};
    return scaled(m, 1.0 - q);
}

Mat2 drift_matrix_og(double kappa, std::size_t bandwidth, DriftSide side) {
    const double q = checked_kappa(kappa);
    if (bandwidth < 2) {
        throw InputError("drift matrix O_G needs G >= 2");
    }
    const double g = static_cast<double>(bandwidth);
    if (side == DriftSide::before) {
        const Mat2 m{{{3.0, 2.0 - q}, {-6.0 / (g + 1.0), (2.0 * q - 1.0 - 3.0 * g) / (g + 1.0)}}};
        return scaled(m, -q * (1.0 - q) / (g - 1.0));
    }
    const Mat2 m{{{-3.0, 2.0 - q}, {6.0 / (g - 1.0), (2.0 * q - 1.0 + 3.0 * g) / (g - 1.0)}}};
    return scaled(m, -q * (1.0 - q) / (g + 1.0));
}

Vec2 delta_curve(const Vec2& change, double kappa) {
    const double q = checked_kappa(kappa);
    const Mat2 m{{{1.0 - 3.0 * q, kappa * (1.0 - q)}, {-6.0 * kappa, -2.0 * q * q + q + 1.0}}};
    return mat_vec(scaled(m, 1.0 - q), change);
}

double g_curve(const Vec2& change, double kappa) {
    const Vec2 d = delta_curve(change, kappa);
    return std::sqrt(d[0] * d[0] + d[1] * d[1] / 3.0);
}

} // namespace mosum
