#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arctrack/errors.hpp"
#include "arctrack/geometry.hpp"
#include "arctrack/rng.hpp"

namespace arctrack {

enum class ScenarioKind {
    circle,
    lemniscate,  ///< figure-eight (Gerono), constant parameter rate
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::circle;
    Vec2 center;
    double radius = 10.0;  ///< circle radius / lemniscate halfwidth [m]
    double speed = 5.0;    ///< circle speed [m/s] / lemniscate parameter rate [rad/s]
    double phase0 = 0.0;   ///< [rad]
    double dt = 0.1;       ///< [s]
    std::size_t steps = 600;
    double noise_sigma = 0.5;   ///< per-axis measurement noise [m]
    double dropout_prob = 0.0;  ///< probability a sample arrives without a measurement
    std::uint64_t seed = 0;
};

/// One pipeline sample. truth is absent only for replayed files without
/// ground-truth columns; an absent measurement is a dropout.
struct TrackSample {
    double t = 0.0;
    std::optional<Vec2> truth;
    std::optional<Vec2> meas;
};

namespace detail {

inline void validate_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("scenario: dt must be positive");
    if (cfg.steps < 1) throw ConfigError("scenario: steps must be >= 1");
    if (!(cfg.radius > 0.0)) throw ConfigError("scenario: radius/halfwidth must be positive");
    if (!(cfg.speed >= 0.0)) throw ConfigError("scenario: speed/rate must be non-negative");
    if (!(cfg.noise_sigma >= 0.0)) throw ConfigError("scenario: noise_sigma must be >= 0");
    if (!(cfg.dropout_prob >= 0.0 && cfg.dropout_prob <= 1.0)) {
        throw ConfigError("scenario: dropout_prob must lie in [0, 1]");
    }
    if (!cfg.center.finite() || !std::isfinite(cfg.phase0)) {
        throw ConfigError("scenario: center/phase0 must be finite");
    }
}

}  // namespace detail

/// Ground truth on a circle: constant speed, angle phase0 + (V/r) k dt.
inline std::vector<TrackSample> gen_circle(const ScenarioConfig& cfg) {
    if (cfg.kind != ScenarioKind::circle) throw ConfigError("gen_circle: kind must be circle");
    detail::validate_scenario(cfg);
    const double omega = cfg.speed / cfg.radius;
    std::vector<TrackSample> out(cfg.steps);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double theta = cfg.phase0 + omega * t;
        out[k].t = t;
        out[k].truth = cfg.center + Vec2{cfg.radius * std::cos(theta),
                                         cfg.radius * std::sin(theta)};
    }
    return out;
}

/// Ground truth on a Gerono lemniscate: (a cos u, a/2 sin 2u) with
/// u = phase0 + rate * t. Speed and curvature vary along the curve.
inline std::vector<TrackSample> gen_lemniscate(const ScenarioConfig& cfg) {
    if (cfg.kind != ScenarioKind::lemniscate) {
        throw ConfigError("gen_lemniscate: kind must be lemniscate");
    }
    detail::validate_scenario(cfg);
    std::vector<TrackSample> out(cfg.steps);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double u = cfg.phase0 + cfg.speed * t;
        out[k].t = t;
        out[k].truth = cfg.center + Vec2{cfg.radius * std::cos(u),
                                         0.5 * cfg.radius * std::sin(2.0 * u)};
    }
    return out;
}

inline std::vector<TrackSample> generate_truth(const ScenarioConfig& cfg) {
    return cfg.kind == ScenarioKind::circle ? gen_circle(cfg) : gen_lemniscate(cfg);
}

/// Attach measurements: truth plus isotropic Gaussian noise, each sample
/// independently dropped with dropout_prob. Sample k consumes counter
/// draws 3k..3k+2 (two for the noise pair, one for the dropout coin), so
/// the output is bit-identical for a given (config, seed).
inline std::vector<TrackSample> corrupt(std::vector<TrackSample> track,
                                        const ScenarioConfig& cfg) {
    detail::validate_scenario(cfg);
    const CounterRng rng(cfg.seed);
    for (std::size_t k = 0; k < track.size(); ++k) {
        if (!track[k].truth) throw ConfigError("corrupt: sample without ground truth");
        const auto [ge, gn] = rng.gaussian_pair(3 * static_cast<std::uint64_t>(k));
        const bool dropped = rng.uniform01(3 * static_cast<std::uint64_t>(k) + 2)
                             < cfg.dropout_prob;
        if (dropped) {
            track[k].meas.reset();
        } else {
            track[k].meas = *track[k].truth + Vec2{cfg.noise_sigma * ge, cfg.noise_sigma * gn};
        }
    }
    return track;
}

/// Name of the noise stream, recorded in output file headers so runs can
/// be reproduced outside this library.
inline std::string rng_algorithm_name() { return "splitmix64-counter+box-muller"; }

}  // namespace arctrack
