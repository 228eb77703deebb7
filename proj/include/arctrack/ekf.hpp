#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "arctrack/errors.hpp"
#include "arctrack/evolution.hpp"
#include "arctrack/geometry.hpp"
#include "arctrack/model.hpp"

namespace arctrack {

/// Covariance propagation substep length [s].
inline constexpr double kCovSubstep = 0.01;

/// Measurement timestamps must match the filter time within this [s].
inline constexpr double kDtTolerance = 1e-6;

/// Process and measurement noise covariances. Q is a continuous-time
/// density [m^2/s]; R is the per-measurement covariance [m^2].
struct NoiseConfig {
    Mat2 Q = Mat2::diagonal(0.1, 0.1);
    Mat2 R = Mat2::identity();
};

struct FilterState {
    TargetState x_hat;
    Mat2 P;  ///< error covariance [m^2], kept symmetric PSD
    double t = 0.0;
    bool initialized = false;
};

/// Correction form for the covariance update.
enum class CovUpdate {
    standard,  ///< P <- (I - LC) P, symmetrized
    joseph,    ///< P <- (I-LC) P (I-LC)^T + L R L^T
};

/// Per-step audit record. corrected/gain/innovation are absent on
/// dropout (predict-only) steps; input is absent on straight-line steps.
struct StepReport {
    TargetState predicted;
    std::optional<TargetState> corrected;
    std::optional<Mat2> gain;
    std::optional<Vec2> innovation;
    Mat2 p_predicted;
    std::optional<Mat2> p_corrected;
    std::optional<InputVector> input;
    bool straight_line = false;
};

namespace detail {

inline bool symmetric_within(const Mat2& m, double tol) {
    return std::abs(m.m01 - m.m10) <= tol * std::max(1.0, m.max_abs());
}

inline void require_covariance(const Mat2& m, bool strictly_positive, const char* what) {
    if (!m.finite()) throw BadCovariance(std::string(what) + ": non-finite entries");
    if (!symmetric_within(m, 1e-9)) {
        throw BadCovariance(std::string(what) + ": asymmetric beyond 1e-9");
    }
    const EigenBounds eig = symmetric_eigenvalues(m);
    if (strictly_positive ? !(eig.min > 0.0) : eig.min < -1e-12 * std::max(1.0, m.trace())) {
        throw BadCovariance(std::string(what) + (strictly_positive
                                                     ? ": not positive definite"
                                                     : ": not positive semi-definite"));
    }
}

inline int substep_count(double dt) {
    // The epsilon keeps dt = k * kCovSubstep from rounding up to k+1 steps.
    return std::max(1, static_cast<int>(std::ceil(dt / kCovSubstep - 1e-9)));
}

}  // namespace detail

/// Start a track at a measurement. P0 must be symmetric positive definite;
/// the noise matrices are validated here once so the per-step operations
/// can assume them.
inline FilterState init_from_measurement(const Measurement& m, const Mat2& p0,
                                         const NoiseConfig& noise) {
    detail::require_covariance(p0, true, "init_from_measurement: P0");
    detail::require_covariance(noise.Q, false, "init_from_measurement: Q");
    detail::require_covariance(noise.R, true, "init_from_measurement: R");
    FilterState f;
    f.x_hat.pos = m.pos;
    f.P = p0;
    f.t = m.t;
    f.initialized = true;
    return f;
}

/// Propagate state and covariance over dt with an explicit substep count.
/// The state integrates the turn dynamics with RK4; the covariance uses
/// explicit Euler on P' = AP + PA^T + Q with A refreshed at each substep,
/// symmetrizing after every step.
inline FilterState predict_step_n(FilterState f, const InputVector& u, double dt,
                                  const NoiseConfig& noise, int substeps) {
    if (!f.initialized) throw NotInitialized("predict_step: filter not initialized");
    if (!(dt > 0.0)) throw std::invalid_argument("predict_step: dt must be positive");
    if (substeps < 1) throw std::invalid_argument("predict_step: substeps must be >= 1");

    const double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) {
        const Mat2 a = jacobian_a(f.x_hat, u);

        const Vec2 k1 = f_dynamics(f.x_hat, u);
        const Vec2 k2 = f_dynamics({f.x_hat.pos + k1 * (h / 2.0)}, u);
        const Vec2 k3 = f_dynamics({f.x_hat.pos + k2 * (h / 2.0)}, u);
        const Vec2 k4 = f_dynamics({f.x_hat.pos + k3 * h}, u);
        f.x_hat.pos += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);

        f.P += (a * f.P + f.P * a.transposed() + noise.Q) * h;
        f.P = f.P.symmetrized();
    }
    f.t += dt;
    return f;
}

inline FilterState predict_step(FilterState f, const InputVector& u, double dt,
                                const NoiseConfig& noise) {
    return predict_step_n(std::move(f), u, dt, noise, detail::substep_count(dt));
}

/// Straight-line propagation: constant velocity, A = 0 (the turn Jacobian
/// vanishes as the curvature center recedes), so P grows by Q*dt exactly.
inline FilterState predict_linear(FilterState f, Vec2 velocity, double dt,
                                  const NoiseConfig& noise) {
    if (!f.initialized) throw NotInitialized("predict_linear: filter not initialized");
    if (!(dt > 0.0)) throw std::invalid_argument("predict_linear: dt must be positive");
    f.x_hat.pos += velocity * dt;
    f.P = (f.P + noise.Q * dt).symmetrized();
    f.t += dt;
    return f;
}

/// Measurement correction. With an identity measurement Jacobian the gain
/// is L = P (R + P)^-1.
inline std::pair<FilterState, StepReport> update_step(FilterState f, const Measurement& m,
                                                      const NoiseConfig& noise,
                                                      CovUpdate form = CovUpdate::standard) {
    if (!f.initialized) throw NotInitialized("update_step: filter not initialized");
    if (std::abs(m.t - f.t) > kDtTolerance) {
        throw std::invalid_argument("update_step: measurement time " + std::to_string(m.t) +
                                    " does not match filter time " + std::to_string(f.t));
    }

    StepReport report;
    report.predicted = f.x_hat;
    report.p_predicted = f.P;

    const Mat2 s = noise.R + f.P;
    const auto s_inv = s.inverse();
    if (!s_inv) throw SingularInnovation("update_step: innovation covariance not invertible");
    const Mat2 gain = f.P * (*s_inv);
    const Vec2 innovation = m.pos - h_measure(f.x_hat);

    f.x_hat.pos += gain * innovation;
    const Mat2 i_lc = Mat2::identity() - gain;  // C = I
    if (form == CovUpdate::standard) {
        f.P = (i_lc * f.P).symmetrized();
    } else {
        f.P = (i_lc * f.P * i_lc.transposed() + gain * noise.R * gain.transposed())
                  .symmetrized();
    }

    report.corrected = f.x_hat;
    report.gain = gain;
    report.innovation = innovation;
    report.p_corrected = f.P;
    return {f, report};
}

/// A timestamped measurement slot; an empty position marks a dropout.
struct MeasurementEvent {
    double t = 0.0;
    std::optional<Vec2> pos;
};

/// Input vector for a curved estimate. The chord speed is converted to arc
/// speed (chord = arc * sinc(delta/2)), so circular motion propagates at
/// the true rate.
inline InputVector input_from_estimate(const CurvatureEstimate& est) {
    if (est.straight_line || !est.center) {
        throw std::invalid_argument("input_from_estimate: estimate has no curvature center");
    }
    const double half = est.delta / 2.0;
    const double sinc = std::abs(half) < 1e-8 ? 1.0 : std::sin(half) / half;
    return {est.speed / sinc, *est.center};
}

/// One full filter step: propagate to the event time using the current
/// curvature estimate (or a straight line when the estimate is flagged
/// straight), then correct if the event carries a measurement.
inline std::pair<FilterState, StepReport> process_measurement(
    FilterState f, const MeasurementEvent& event, const CurvatureEstimate& est,
    const NoiseConfig& noise, CovUpdate form = CovUpdate::standard) {
    if (!f.initialized) throw NotInitialized("process_measurement: filter not initialized");
    if (!(event.t > f.t)) {
        throw std::invalid_argument("process_measurement: event time must be after filter time");
    }

    const double dt = event.t - f.t;
    StepReport report;
    if (est.straight_line) {
        f = predict_linear(std::move(f), est.direction * est.speed, dt, noise);
        report.straight_line = true;
    } else {
        const InputVector u = input_from_estimate(est);
        f = predict_step(std::move(f), u, dt, noise);
        report.input = u;
    }
    report.predicted = f.x_hat;
    report.p_predicted = f.P;

    if (event.pos) {
        auto [updated, update_report] = update_step(std::move(f), {event.t, *event.pos},
                                                    noise, form);
        update_report.input = report.input;
        update_report.straight_line = report.straight_line;
        return {updated, update_report};
    }
    return {f, report};
}

}  // namespace arctrack
