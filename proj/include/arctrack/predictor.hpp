#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "arctrack/errors.hpp"
#include "arctrack/evolution.hpp"
#include "arctrack/geometry.hpp"

namespace arctrack {

enum class PropagationMode {
    chord_rotation,  ///< rotate the last chord each step; exact on circles
    arc_length,      ///< step the heading recurrence by speed * dt
};

struct PredictionConfig {
    std::size_t window_len = 20;
    std::size_t horizon_steps = 20;
    double step_dt = 0.1;  ///< [s]
    PropagationMode mode = PropagationMode::chord_rotation;
};

struct PredictedTrajectory {
    struct Point {
        double t = 0.0;
        Vec2 pos;
    };
    double start_t = 0.0;        ///< timestamp the prediction was issued at
    std::vector<Point> points;   ///< horizon_steps points, step_dt apart
};

/// Heading of the newest chord under the convention that a step of the
/// motion model displaces by (-sin(theta), cos(theta)) times the step
/// length (theta = 0 points north).
inline double heading_seed(const ObservationWindow& w) {
    if (w.size() < 2) throw InsufficientData("heading_seed: need at least 2 observations");
    const Vec2 d = w[w.size() - 1].pos - w[w.size() - 2].pos;
    if (!(d.norm() > kEpsIncrement)) {
        throw DegenerateIncrements("heading_seed: last increment below " +
                                   std::to_string(kEpsIncrement) + " m");
    }
    return std::atan2(-d.e, d.n);
}

namespace detail {

/// Mean spacing of the newest `count` samples; rejects >1% jitter.
inline double uniform_interval(const ObservationWindow& w, std::size_t count) {
    const std::size_t first = w.size() - count;
    double mean = (w[w.size() - 1].t - w[first].t) / static_cast<double>(count - 1);
    for (std::size_t i = first + 1; i < w.size(); ++i) {
        const double dt = w[i].t - w[i - 1].t;
        if (std::abs(dt - mean) > 0.01 * mean) {
            throw NonUniformSampling("predict_horizon: sample spacing " + std::to_string(dt) +
                                     " deviates more than 1% from mean " + std::to_string(mean));
        }
    }
    return mean;
}

}  // namespace detail

/// Extrapolate the track over cfg.horizon_steps future steps. The newest
/// cfg.window_len samples feed the evolution-matrix fit; propagation then
/// rotates the last increment step by step (or walks the heading
/// recurrence in arc_length mode). When step_dt differs from the observed
/// spacing the step length is rescaled to speed * step_dt.
inline PredictedTrajectory predict_horizon(const ObservationWindow& w,
                                           const PredictionConfig& cfg) {
    const std::size_t need = std::max<std::size_t>(3, cfg.window_len);
    if (w.size() < need) {
        throw InsufficientData("predict_horizon: need " + std::to_string(need) +
                               " observations, have " + std::to_string(w.size()));
    }
    if (cfg.horizon_steps < 1 || !(cfg.step_dt > 0.0)) {
        throw std::invalid_argument("predict_horizon: horizon_steps >= 1 and step_dt > 0 required");
    }

    const double observed_dt = detail::uniform_interval(w, need);

    std::vector<Vec2> increments;
    increments.reserve(need - 1);
    for (std::size_t i = w.size() - need + 1; i < w.size(); ++i) {
        increments.push_back(w[i].pos - w[i - 1].pos);
    }
    const EvolutionMatrix ev = solve_evolution(increments);

    const Vec2 last_inc = increments.back();
    const double chord = last_inc.norm();
    if (!(chord > kEpsIncrement)) {
        throw DegenerateIncrements("predict_horizon: last increment below " +
                                   std::to_string(kEpsIncrement) + " m");
    }
    const bool straight = std::abs(ev.delta) < kEpsDelta;

    // Keep the observed chord when stepping at the observed cadence.
    double step_len = chord;
    if (std::abs(cfg.step_dt - observed_dt) > 1e-9 * observed_dt) {
        double speed = 0.0;
        for (const Vec2& d : increments) speed += d.norm();
        speed /= static_cast<double>(increments.size()) * observed_dt;
        step_len = speed * cfg.step_dt;
    }

    PredictedTrajectory out;
    out.start_t = w.back().t;
    out.points.reserve(cfg.horizon_steps);

    if (cfg.mode == PropagationMode::chord_rotation) {
        Vec2 step = last_inc * (step_len / chord);
        const Mat2 rot = Mat2::rotation(ev.delta);
        Vec2 pos = w.back().pos;
        for (std::size_t i = 1; i <= cfg.horizon_steps; ++i) {
            if (!straight) step = rot * step;
            pos += step;
            out.points.push_back({out.start_t + static_cast<double>(i) * cfg.step_dt, pos});
        }
    } else {
        // Tangent heading at the window end is the chord heading plus half
        // a turn step.
        double theta = heading_seed(w) + (straight ? 0.0 : ev.delta / 2.0);
        Vec2 pos = w.back().pos;
        for (std::size_t i = 1; i <= cfg.horizon_steps; ++i) {
            pos += Vec2{-std::sin(theta), std::cos(theta)} * step_len;
            if (!straight) theta += ev.delta;
            out.points.push_back({out.start_t + static_cast<double>(i) * cfg.step_dt, pos});
        }
    }
    return out;
}

}  // namespace arctrack
