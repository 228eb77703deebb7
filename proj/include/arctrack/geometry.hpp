#pragma once

#include <cmath>
#include <optional>

namespace arctrack {

/// Planar vector in the inertial east-north frame (meters, or meters/second
/// when used as a velocity or position increment).
struct Vec2 {
    double e = 0.0;
    double n = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double e_, double n_) : e(e_), n(n_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {e + o.e, n + o.n}; }
    constexpr Vec2 operator-(Vec2 o) const { return {e - o.e, n - o.n}; }
    constexpr Vec2 operator-() const { return {-e, -n}; }
    constexpr Vec2 operator*(double k) const { return {e * k, n * k}; }
    constexpr Vec2 operator/(double k) const { return {e / k, n / k}; }
    constexpr Vec2& operator+=(Vec2 o) { e += o.e; n += o.n; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { e -= o.e; n -= o.n; return *this; }

    constexpr double squared_norm() const { return e * e + n * n; }
    double norm() const { return std::hypot(e, n); }

    /// Counterclockwise quarter turn: (e, n) -> (-n, e).
    constexpr Vec2 perp() const { return {-n, e}; }

    bool finite() const { return std::isfinite(e) && std::isfinite(n); }
};

constexpr Vec2 operator*(double k, Vec2 v) { return v * k; }
constexpr double dot(Vec2 a, Vec2 b) { return a.e * b.e + a.n * b.n; }
/// z-component of the 3-D cross product; positive when b is counterclockwise of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.e * b.n - a.n * b.e; }

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.e - s * v.n, s * v.e + c * v.n};
}

/// Row-major 2x2 real matrix.
struct Mat2 {
    double m00 = 0.0, m01 = 0.0;
    double m10 = 0.0, m11 = 0.0;

    static constexpr Mat2 zero() { return {}; }
    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diagonal(double a, double b) { return {a, 0.0, 0.0, b}; }
    static Mat2 rotation(double angle) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        return {c, -s, s, c};
    }

    constexpr Mat2 operator+(const Mat2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    constexpr Mat2 operator*(double k) const { return {m00 * k, m01 * k, m10 * k, m11 * k}; }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    constexpr Vec2 operator*(Vec2 v) const {
        return {m00 * v.e + m01 * v.n, m10 * v.e + m11 * v.n};
    }
    constexpr Mat2& operator+=(const Mat2& o) {
        m00 += o.m00; m01 += o.m01; m10 += o.m10; m11 += o.m11;
        return *this;
    }

    constexpr Mat2 transposed() const { return {m00, m10, m01, m11}; }
    constexpr double det() const { return m00 * m11 - m01 * m10; }
    constexpr double trace() const { return m00 + m11; }
    constexpr Mat2 symmetrized() const {
        const double off = 0.5 * (m01 + m10);
        return {m00, off, off, m11};
    }

    double max_abs() const {
        return std::max(std::max(std::abs(m00), std::abs(m01)),
                        std::max(std::abs(m10), std::abs(m11)));
    }

    std::optional<Mat2> inverse() const {
        const double d = det();
        if (d == 0.0 || !std::isfinite(d)) return std::nullopt;
        return Mat2{m11 / d, -m01 / d, -m10 / d, m00 / d};
    }

    bool finite() const {
        return std::isfinite(m00) && std::isfinite(m01) && std::isfinite(m10) &&
               std::isfinite(m11);
    }
};

constexpr Mat2 operator*(double k, const Mat2& m) { return m * k; }

/// a * b^T
constexpr Mat2 outer(Vec2 a, Vec2 b) {
    return {a.e * b.e, a.e * b.n, a.n * b.e, a.n * b.n};
}

struct EigenBounds {
    double min = 0.0;
    double max = 0.0;
};

/// Eigenvalues of a symmetric matrix, closed form. The off-diagonal entries
/// are averaged first, so slightly asymmetric inputs are tolerated.
inline EigenBounds symmetric_eigenvalues(const Mat2& m) {
    const double mean = 0.5 * (m.m00 + m.m11);
    const double off = 0.5 * (m.m01 + m.m10);
    const double half_gap = 0.5 * (m.m00 - m.m11);
    const double r = std::hypot(half_gap, off);
    return {mean - r, mean + r};
}

}  // namespace arctrack
