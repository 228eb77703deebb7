#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arctrack/csv.hpp"
#include "arctrack/ekf.hpp"
#include "arctrack/errors.hpp"
#include "arctrack/evolution.hpp"
#include "arctrack/metrics.hpp"
#include "arctrack/predictor.hpp"
#include "arctrack/simulator.hpp"

namespace arctrack {

/// Which position stream feeds an estimation window.
enum class WindowInput {
    filtered,  ///< the filter's own per-step output
    raw,       ///< measurements only
};

struct RunConfig {
    /// Exactly one of scenario / input_path must be set.
    std::optional<ScenarioConfig> scenario = ScenarioConfig{};
    std::optional<std::string> input_path;

    Mat2 process_noise = Mat2::diagonal(0.1, 0.1);  ///< Q [m^2/s]
    /// R [m^2]; when absent it defaults to r_amplification * sigma^2 * I
    /// from the scenario noise (file replay must set it explicitly).
    std::optional<Mat2> measurement_noise;
    double r_amplification = 4.0;
    double p0_scale = 4.0;  ///< P0 = p0_scale * diag(R)
    CovUpdate update_form = CovUpdate::standard;

    std::size_t evolution_window = 20;
    /// The filter-input window takes every stride-th accepted position.
    /// Longer increments keep the curvature fit conditioned when the
    /// per-step displacement is smaller than the measurement noise.
    std::size_t evolution_stride = 10;
    WindowInput evolution_input = WindowInput::raw;
    CenterMode center_mode = CenterMode::midpoint_corrected;

    PredictionConfig prediction;
    WindowInput prediction_input = WindowInput::filtered;
    /// Absent: predict at the observed sampling interval.
    std::optional<double> prediction_step_dt;

    std::string out_dir = ".";
};

/// Per-step audit record: covariance snapshots plus the input vector the
/// propagation ran with (absent on straight-line steps).
struct StepDiagnostics {
    double t = 0.0;
    Mat2 p_predicted;
    std::optional<Mat2> p_corrected;
    std::optional<InputVector> input;
};

struct RunArtifacts {
    std::vector<TrackRow> rows;
    std::vector<PredictedTrajectory> predictions;
    std::vector<StepDiagnostics> diagnostics;
    /// Absent when the input carries no ground truth.
    std::optional<MetricsReport> metrics;
};

namespace pipeline_detail {

inline double default_sample_dt(std::span<const TrackSample> samples) {
    if (samples.size() >= 2) return samples[1].t - samples[0].t;
    return 0.1;
}

inline Mat2 resolve_measurement_noise(const RunConfig& cfg) {
    if (cfg.measurement_noise) return *cfg.measurement_noise;
    if (!cfg.scenario) {
        throw ConfigError("file replay requires an explicit measurement noise covariance");
    }
    const double sigma = std::max(cfg.scenario->noise_sigma, 1e-6);
    const double var = cfg.r_amplification * sigma * sigma;
    return Mat2::diagonal(var, var);
}

inline void validate(const RunConfig& cfg) {
    if (cfg.scenario.has_value() == cfg.input_path.has_value()) {
        throw ConfigError("exactly one of scenario / input path must be configured");
    }
    if (cfg.evolution_window < 3) throw ConfigError("evolution window must be >= 3");
    if (cfg.evolution_stride < 1) throw ConfigError("evolution stride must be >= 1");
    if (cfg.prediction.window_len < 3) throw ConfigError("prediction window must be >= 3");
    if (cfg.prediction.horizon_steps < 1) throw ConfigError("prediction horizon must be >= 1");
    if (!(cfg.r_amplification > 0.0)) throw ConfigError("r_amplification must be positive");
    if (!(cfg.p0_scale > 0.0)) throw ConfigError("p0_scale must be positive");
    if (cfg.prediction_step_dt && !(*cfg.prediction_step_dt > 0.0)) {
        throw ConfigError("prediction step_dt must be positive");
    }
}

inline MetricsReport compute_metrics(std::span<const TrackRow> rows,
                                     std::span<const TrackSample> samples,
                                     std::span<const PredictedTrajectory> predictions) {
    MetricsReport report;
    std::vector<Vec2> truth, meas, filt;
    for (const TrackRow& r : rows) {
        if (r.dropped()) ++report.dropout_count;
        if (r.truth && r.meas && r.filt) {
            truth.push_back(*r.truth);
            meas.push_back(*r.meas);
            filt.push_back(*r.filt);
        }
    }
    if (!truth.empty()) {
        report.rmse_raw = rmse(meas, truth);
        report.rmse_filtered = rmse(filt, truth);
    }

    // Only predictions whose whole horizon lies inside the track can be
    // scored against truth.
    std::vector<PredictedTrajectory> scorable;
    const double t_end = samples.empty() ? 0.0 : samples.back().t;
    for (const PredictedTrajectory& p : predictions) {
        if (!p.points.empty() && p.points.back().t <= t_end + kDtTolerance) {
            scorable.push_back(p);
        }
    }
    report.prediction_error_by_horizon = prediction_error_profile(scorable, samples);
    return report;
}

}  // namespace pipeline_detail

/// Run the estimation pipeline over a sample stream. Per event: refresh
/// the curvature estimate from the strided evolution window, filter, feed
/// the windows, and re-issue a horizon prediction. The filter initializes
/// once the evolution window holds three positions (two increments are
/// the minimum for the rotation fit); earlier rows pass the measurement
/// through as the estimate.
inline RunArtifacts run_track(std::span<const TrackSample> samples, const RunConfig& cfg) {
    pipeline_detail::validate(cfg);

    NoiseConfig noise;
    noise.Q = cfg.process_noise;
    noise.R = pipeline_detail::resolve_measurement_noise(cfg);
    const Mat2 p0 = Mat2::diagonal(cfg.p0_scale * noise.R.m00, cfg.p0_scale * noise.R.m11);

    PredictionConfig pred_cfg = cfg.prediction;
    pred_cfg.step_dt =
        cfg.prediction_step_dt.value_or(pipeline_detail::default_sample_dt(samples));

    ObservationWindow ekf_window(cfg.evolution_window);
    ObservationWindow pred_window(std::max<std::size_t>(3, cfg.prediction.window_len));

    RunArtifacts out;
    out.rows.reserve(samples.size());

    FilterState filter;
    std::size_t accepted = 0;  // measurements seen, drives the stride phase
    bool any_truth = false;

    for (const TrackSample& s : samples) {
        any_truth = any_truth || s.truth.has_value();
        std::optional<Vec2> filt;

        if (!filter.initialized) {
            if (s.meas) {
                filt = s.meas;
                pred_window.push(s.t, *s.meas);
                if (accepted % cfg.evolution_stride == 0) {
                    ekf_window.push(s.t, *s.meas);
                    if (ekf_window.size() == 3) {
                        filter = init_from_measurement({s.t, *s.meas}, p0, noise);
                    }
                }
                ++accepted;
            }
        } else {
            const std::vector<Vec2> increments = build_increments(ekf_window);
            const EvolutionMatrix ev = solve_evolution(increments);
            CurvatureEstimate est = curvature_center(ekf_window, ev, cfg.center_mode);
            // The windowed mean is a steadier speed input than the single
            // newest chord.
            est.speed = estimate_speed(ekf_window);

            auto [next, report] =
                process_measurement(filter, {s.t, s.meas}, est, noise, cfg.update_form);
            filter = next;
            filt = filter.x_hat.pos;
            out.diagnostics.push_back({s.t, report.p_predicted, report.p_corrected,
                                       report.input});

            if (s.meas) {
                if (accepted % cfg.evolution_stride == 0) {
                    ekf_window.push(s.t, cfg.evolution_input == WindowInput::raw ? *s.meas
                                                                                 : *filt);
                }
                ++accepted;
            }
            if (cfg.prediction_input == WindowInput::filtered) {
                pred_window.push(s.t, *filt);
            } else if (s.meas) {
                pred_window.push(s.t, *s.meas);
            }

            if (s.meas && pred_window.size() >= std::max<std::size_t>(3, pred_cfg.window_len)) {
                try {
                    out.predictions.push_back(predict_horizon(pred_window, pred_cfg));
                } catch (const NonUniformSampling&) {
                    // Dropout gaps in a raw-fed window (or before the first
                    // fill) break uniform spacing; skip this issue.
                }
            }
        }

        out.rows.push_back({s.t, s.truth, s.meas, filt});
    }

    if (any_truth) {
        out.metrics = pipeline_detail::compute_metrics(out.rows, samples, out.predictions);
    }
    return out;
}

inline std::vector<TrackSample> load_samples(const RunConfig& cfg) {
    pipeline_detail::validate(cfg);
    if (cfg.scenario) return corrupt(generate_truth(*cfg.scenario), *cfg.scenario);
    return ingest_measurements(*cfg.input_path);
}

inline CsvMetadata scenario_metadata(const RunConfig& cfg) {
    CsvMetadata meta;
    if (cfg.scenario) {
        meta.emplace_back("rng", rng_algorithm_name());
        meta.emplace_back("seed", std::to_string(cfg.scenario->seed));
    }
    return meta;
}

/// Full scenario run: generate (or load) samples, filter + predict, write
/// track.csv and predictions.csv under cfg.out_dir, return the metrics.
inline MetricsReport run_scenario(const RunConfig& cfg) {
    const std::vector<TrackSample> samples = load_samples(cfg);
    RunArtifacts art = run_track(samples, cfg);

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    const CsvMetadata meta = scenario_metadata(cfg);
    write_track_csv(dir / "track.csv", art.rows, meta);
    write_predictions_csv(dir / "predictions.csv", art.predictions, meta);

    if (!art.metrics) {
        throw ConfigError("run_scenario: input carries no ground truth to score against");
    }
    return *art.metrics;
}

}  // namespace arctrack
