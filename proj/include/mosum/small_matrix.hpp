#pragma once

#include <array>

namespace mosum {

using Vec2 = std::array<double, 2>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<std::array<double, 2>, 2>;

inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {{{a[0][0] + b[0][0], a[0][1] + b[0][1]}, {a[1][0] + b[1][0], a[1][1] + b[1][1]}}};
}

inline Mat2 scaled(const Mat2& a, double s) {
    return {{{s * a[0][0], s * a[0][1]}, {s * a[1][0], s * a[1][1]}}};
}

inline Vec2 mat_vec(const Mat2& m, const Vec2& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline constexpr Mat2 identity2() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

} // namespace mosum
