#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "arctrack/errors.hpp"
#include "arctrack/geometry.hpp"

namespace arctrack {

/// Turn angles below this [rad] fall back to straight-line motion; the
/// center recovery divides by the angle.
inline constexpr double kEpsDelta = 1e-4;

/// Increments shorter than this [m] carry no direction information.
inline constexpr double kEpsIncrement = 1e-9;

/// Sliding window of timestamped positions, oldest first. Pushing past the
/// capacity evicts the oldest sample. Plain value type; copy freely, but
/// mutate a given window from one logical stream only.
class ObservationWindow {
public:
    struct Sample {
        double t = 0.0;
        Vec2 pos;
    };

    explicit ObservationWindow(std::size_t capacity = 20) : capacity_(capacity) {
        if (capacity_ < 3) {
            throw std::invalid_argument("ObservationWindow: capacity must be >= 3");
        }
    }

    void push(double t, Vec2 pos) {
        if (!samples_.empty() && !(t > samples_.back().t)) {
            throw NonMonotoneTime("ObservationWindow: timestamp " + std::to_string(t) +
                                  " not after " + std::to_string(samples_.back().t));
        }
        samples_.push_back({t, pos});
        if (samples_.size() > capacity_) samples_.pop_front();
    }

    std::size_t size() const { return samples_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool full() const { return samples_.size() == capacity_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    const Sample& front() const { return samples_.front(); }
    const Sample& back() const { return samples_.back(); }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

private:
    std::size_t capacity_;
    std::deque<Sample> samples_;
};

/// Consecutive position differences, oldest first; length is size - 1.
inline std::vector<Vec2> build_increments(const ObservationWindow& w) {
    if (w.size() < 2) {
        throw InsufficientData("build_increments: need at least 2 observations, have " +
                               std::to_string(w.size()));
    }
    std::vector<Vec2> out;
    out.reserve(w.size() - 1);
    for (std::size_t i = 1; i < w.size(); ++i) {
        out.push_back(w[i].pos - w[i - 1].pos);
    }
    return out;
}

/// Unit (cos, sin) pair mapping one increment to the next by rotation,
/// with the recovered turn angle per step.
struct EvolutionMatrix {
    double c = 1.0;      ///< cos(delta)
    double s = 0.0;      ///< sin(delta)
    double delta = 0.0;  ///< atan2(s, c) [rad]
};

/// Least-squares fit of the rotation taking each increment into its
/// successor. The two normal-equation columns are orthogonal by
/// construction, so the solve reduces to two dot products; the result is
/// normalized to a true rotation afterwards.
inline EvolutionMatrix solve_evolution(std::span<const Vec2> increments) {
    if (increments.size() < 2) {
        throw InsufficientData("solve_evolution: need at least 2 increments, have " +
                               std::to_string(increments.size()));
    }
    double mean_len = 0.0;
    for (const Vec2& d : increments) mean_len += d.norm();
    mean_len /= static_cast<double>(increments.size());
    if (!(mean_len > kEpsIncrement)) {
        throw DegenerateIncrements("solve_evolution: all increments below " +
                                   std::to_string(kEpsIncrement) + " m");
    }

    // min over (c,s) of sum_j |cur_j - (c*prev_j + s*perp(prev_j))|^2,
    // increments pre-scaled by their mean length for conditioning.
    double num_c = 0.0, num_s = 0.0, den = 0.0;
    for (std::size_t j = 1; j < increments.size(); ++j) {
        const Vec2 prev = increments[j - 1] / mean_len;
        const Vec2 cur = increments[j] / mean_len;
        den += prev.squared_norm();
        num_c += dot(prev, cur);
        num_s += cross(prev, cur);
    }
    if (!(den > 0.0)) {
        throw DegenerateIncrements("solve_evolution: no usable predecessor increments");
    }
    const double c = num_c / den;
    const double s = num_s / den;
    const double len = std::hypot(c, s);
    if (!(len > 0.0)) {
        throw DegenerateIncrements("solve_evolution: rotation direction unresolvable");
    }
    EvolutionMatrix ev{c / len, s / len, 0.0};
    ev.delta = std::atan2(ev.s, ev.c);
    return ev;
}

enum class CenterMode {
    raw,                 ///< forward-difference recovery from the newest increment
    midpoint_corrected,  ///< perpendicular from the chord midpoint; exact on arcs
};

/// Instantaneous-circle parameters recovered from a window and a solved
/// evolution matrix. center/radius are absent when the motion is flagged
/// as straight. direction is the unit vector of the newest chord.
struct CurvatureEstimate {
    std::optional<Vec2> center;
    std::optional<double> radius;
    double speed = 0.0;  ///< newest chord length over its time step [m/s]
    double delta = 0.0;  ///< turn angle per step [rad]
    Vec2 direction;
    bool straight_line = false;
};

inline CurvatureEstimate curvature_center(const ObservationWindow& w,
                                          const EvolutionMatrix& ev, CenterMode mode) {
    if (w.size() < 2) {
        throw InsufficientData("curvature_center: need at least 2 observations");
    }
    const ObservationWindow::Sample& a = w[w.size() - 2];
    const ObservationWindow::Sample& b = w[w.size() - 1];
    const Vec2 chord = b.pos - a.pos;
    const double len = chord.norm();

    CurvatureEstimate est;
    est.delta = ev.delta;
    est.speed = len / (b.t - a.t);
    if (len > 0.0) est.direction = chord / len;

    // A vanishing chord gives no usable geometry either; coast instead.
    if (std::abs(ev.delta) < kEpsDelta || !(len > kEpsIncrement)) {
        est.straight_line = true;
        return est;
    }

    if (mode == CenterMode::raw) {
        est.center = b.pos + chord.perp() / ev.delta;
    } else {
        const Vec2 mid = (a.pos + b.pos) * 0.5;
        est.center = mid + est.direction.perp() * (len / (2.0 * std::tan(ev.delta / 2.0)));
    }
    est.radius = len / (2.0 * std::abs(std::sin(ev.delta / 2.0)));
    return est;
}

/// Mean chord speed over the window [m/s].
inline double estimate_speed(const ObservationWindow& w) {
    if (w.size() < 2) {
        throw InsufficientData("estimate_speed: need at least 2 observations");
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        sum += (w[i].pos - w[i - 1].pos).norm() / (w[i].t - w[i - 1].t);
    }
    return sum / static_cast<double>(w.size() - 1);
}

}  // namespace arctrack
