#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arctrack/ekf.hpp"
#include "arctrack/errors.hpp"
#include "arctrack/geometry.hpp"
#include "arctrack/predictor.hpp"
#include "arctrack/simulator.hpp"

namespace arctrack {

/// Root mean squared Euclidean distance between two equally long series.
inline double rmse(std::span<const Vec2> a, std::span<const Vec2> b) {
    if (a.size() != b.size() || a.empty()) {
        throw LengthMismatch("rmse: series lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]).squared_norm();
    return std::sqrt(sum / static_cast<double>(a.size()));
}

struct HorizonError {
    std::size_t step = 0;  ///< horizon offset, 1-based
    double mean = 0.0;     ///< [m]
    double max = 0.0;      ///< [m]
};

/// Aggregate |predicted - truth| per horizon offset across all issued
/// predictions. Every predicted timestamp must land on a truth sample
/// within kDtTolerance.
inline std::vector<HorizonError> prediction_error_profile(
    std::span<const PredictedTrajectory> predictions, std::span<const TrackSample> truth) {
    std::vector<double> sums, maxima;
    std::vector<std::size_t> counts;

    for (const PredictedTrajectory& p : predictions) {
        for (std::size_t h = 0; h < p.points.size(); ++h) {
            const double t = p.points[h].t;
            const auto it = std::lower_bound(
                truth.begin(), truth.end(), t - kDtTolerance,
                [](const TrackSample& s, double value) { return s.t < value; });
            if (it == truth.end() || std::abs(it->t - t) > kDtTolerance) {
                throw AlignmentError("prediction_error_profile: no truth sample at t=" +
                                     std::to_string(t));
            }
            if (!it->truth) {
                throw AlignmentError("prediction_error_profile: sample at t=" +
                                     std::to_string(t) + " lacks ground truth");
            }
            const double err = (p.points[h].pos - *it->truth).norm();
            if (h >= sums.size()) {
                sums.resize(h + 1, 0.0);
                maxima.resize(h + 1, 0.0);
                counts.resize(h + 1, 0);
            }
            sums[h] += err;
            maxima[h] = std::max(maxima[h], err);
            ++counts[h];
        }
    }

    std::vector<HorizonError> out;
    out.reserve(sums.size());
    for (std::size_t h = 0; h < sums.size(); ++h) {
        if (counts[h] == 0) continue;
        out.push_back({h + 1, sums[h] / static_cast<double>(counts[h]), maxima[h]});
    }
    return out;
}

struct MetricsReport {
    double rmse_raw = 0.0;       ///< measurement vs truth, non-dropped samples [m]
    double rmse_filtered = 0.0;  ///< filter output vs truth, same samples [m]
    std::vector<HorizonError> prediction_error_by_horizon;
    std::size_t dropout_count = 0;
};

}  // namespace arctrack
