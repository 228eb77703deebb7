#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "arctrack/errors.hpp"
#include "arctrack/geometry.hpp"
#include "arctrack/predictor.hpp"
#include "arctrack/simulator.hpp"

namespace arctrack {

/// One row of a track file. An absent measurement is a dropout; truth and
/// filtered columns are optional (replayed files may lack either).
struct TrackRow {
    double t = 0.0;
    std::optional<Vec2> truth;
    std::optional<Vec2> meas;
    std::optional<Vec2> filt;

    bool dropped() const { return !meas.has_value(); }
};

namespace csv_detail {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

struct LineContext {
    const std::filesystem::path& path;
    std::size_t line;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
    }
};

inline double parse_double(std::string_view field, const LineContext& ctx,
                           std::string_view name) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        ctx.fail("cannot parse " + std::string(name) + " value '" + std::string(field) + "'");
    }
    if (!std::isfinite(v)) {
        ctx.fail("non-finite " + std::string(name) + " value '" + std::string(field) + "'");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace csv_detail

inline constexpr std::string_view kTrackHeader =
    "t,truth_e,truth_n,meas_e,meas_n,filt_e,filt_n,dropped";
inline constexpr std::string_view kPredictionHeader =
    "issued_t,horizon_step,pred_t,pred_e,pred_n";

/// Key/value comment lines emitted before the CSV header ("# key: value").
using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

inline void write_track_csv(std::ostream& os, std::span<const TrackRow> rows,
                            const CsvMetadata& meta = {}) {
    for (const auto& [key, value] : meta) os << "# " << key << ": " << value << "\n";
    os << kTrackHeader << "\n";
    using csv_detail::format_opt;
    for (const TrackRow& r : rows) {
        os << csv_detail::format_double(r.t) << ','
           << format_opt(r.truth ? std::optional(r.truth->e) : std::nullopt) << ','
           << format_opt(r.truth ? std::optional(r.truth->n) : std::nullopt) << ','
           << format_opt(r.meas ? std::optional(r.meas->e) : std::nullopt) << ','
           << format_opt(r.meas ? std::optional(r.meas->n) : std::nullopt) << ','
           << format_opt(r.filt ? std::optional(r.filt->e) : std::nullopt) << ','
           << format_opt(r.filt ? std::optional(r.filt->n) : std::nullopt) << ','
           << (r.dropped() ? '1' : '0') << "\n";
    }
}

inline void write_track_csv(const std::filesystem::path& path, std::span<const TrackRow> rows,
                            const CsvMetadata& meta = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write_track_csv(os, rows, meta);
    if (!os) throw IoError("failed writing " + path.string());
}

inline void write_predictions_csv(std::ostream& os,
                                  std::span<const PredictedTrajectory> predictions,
                                  const CsvMetadata& meta = {}) {
    for (const auto& [key, value] : meta) os << "# " << key << ": " << value << "\n";
    os << kPredictionHeader << "\n";
    using csv_detail::format_double;
    for (const PredictedTrajectory& p : predictions) {
        for (std::size_t h = 0; h < p.points.size(); ++h) {
            os << format_double(p.start_t) << ',' << (h + 1) << ','
               << format_double(p.points[h].t) << ',' << format_double(p.points[h].pos.e)
               << ',' << format_double(p.points[h].pos.n) << "\n";
        }
    }
}

inline void write_predictions_csv(const std::filesystem::path& path,
                                  std::span<const PredictedTrajectory> predictions,
                                  const CsvMetadata& meta = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write_predictions_csv(os, predictions, meta);
    if (!os) throw IoError("failed writing " + path.string());
}

/// Read a track file. Column order is free; `t` is required, the e/n
/// column pairs are optional as pairs. Lines starting with '#' are
/// metadata comments. Timestamps must be strictly increasing.
inline std::vector<TrackRow> read_track_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string() + " for reading");

    std::string line;
    std::size_t line_no = 0;
    std::unordered_map<std::string, std::size_t> columns;

    while (std::getline(is, line)) {
        ++line_no;
        const std::string_view sv = csv_detail::strip_cr(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto fields = csv_detail::split(sv);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            columns.emplace(std::string(fields[i]), i);
        }
        break;
    }
    if (columns.empty()) throw ParseError(path.string() + ": missing header line");
    if (!columns.contains("t")) throw ParseError(path.string() + ": header lacks column 't'");

    const auto col = [&](const char* name) -> std::optional<std::size_t> {
        const auto it = columns.find(name);
        if (it == columns.end()) return std::nullopt;
        return it->second;
    };
    const auto t_col = *col("t");
    const auto truth_e = col("truth_e"), truth_n = col("truth_n");
    const auto meas_e = col("meas_e"), meas_n = col("meas_n");
    const auto filt_e = col("filt_e"), filt_n = col("filt_n");

    std::vector<TrackRow> rows;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string_view sv = csv_detail::strip_cr(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto fields = csv_detail::split(sv);
        const csv_detail::LineContext ctx{path, line_no};
        if (fields.size() != columns.size()) {
            ctx.fail("expected " + std::to_string(columns.size()) + " fields, found " +
                     std::to_string(fields.size()));
        }

        const auto vec_at = [&](std::optional<std::size_t> ce, std::optional<std::size_t> cn,
                                const char* name) -> std::optional<Vec2> {
            if (!ce || !cn) return std::nullopt;
            const std::string_view fe = fields[*ce];
            const std::string_view fn = fields[*cn];
            if (fe.empty() && fn.empty()) return std::nullopt;
            if (fe.empty() || fn.empty()) ctx.fail(std::string(name) + " column pair half-empty");
            return Vec2{csv_detail::parse_double(fe, ctx, name),
                        csv_detail::parse_double(fn, ctx, name)};
        };

        TrackRow row;
        row.t = csv_detail::parse_double(fields[t_col], ctx, "t");
        row.truth = vec_at(truth_e, truth_n, "truth");
        row.meas = vec_at(meas_e, meas_n, "meas");
        row.filt = vec_at(filt_e, filt_n, "filt");
        if (!rows.empty() && !(row.t > rows.back().t)) {
            throw NonMonotoneTime(path.string() + ":" + std::to_string(line_no) +
                                  ": timestamp " + csv_detail::format_double(row.t) +
                                  " not after " + csv_detail::format_double(rows.back().t));
        }
        rows.push_back(row);
    }
    return rows;
}

/// Replay entry point: track rows reduced to pipeline samples. The file
/// must carry measurement columns (dropout rows may leave them empty).
inline std::vector<TrackSample> ingest_measurements(const std::filesystem::path& path) {
    const std::vector<TrackRow> rows = read_track_csv(path);
    std::vector<TrackSample> samples;
    samples.reserve(rows.size());
    bool any_meas = false;
    for (const TrackRow& r : rows) {
        samples.push_back({r.t, r.truth, r.meas});
        any_meas = any_meas || r.meas.has_value();
    }
    if (!rows.empty() && !any_meas) {
        throw ParseError(path.string() + ": no measurement data (meas_e/meas_n columns)");
    }
    return samples;
}

/// Read a prediction file back, grouping rows by issue time.
inline std::vector<PredictedTrajectory> read_predictions_csv(
    const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string() + " for reading");

    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<PredictedTrajectory> out;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string_view sv = csv_detail::strip_cr(line);
        if (sv.empty() || sv.front() == '#') continue;
        if (!header_seen) {
            if (sv != kPredictionHeader) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": unexpected prediction header");
            }
            header_seen = true;
            continue;
        }
        const auto fields = csv_detail::split(sv);
        const csv_detail::LineContext ctx{path, line_no};
        if (fields.size() != 5) ctx.fail("expected 5 fields");
        const double issued = csv_detail::parse_double(fields[0], ctx, "issued_t");
        const double pred_t = csv_detail::parse_double(fields[2], ctx, "pred_t");
        const Vec2 pos{csv_detail::parse_double(fields[3], ctx, "pred_e"),
                       csv_detail::parse_double(fields[4], ctx, "pred_n")};
        if (out.empty() || out.back().start_t != issued) {
            out.push_back({issued, {}});
        }
        out.back().points.push_back({pred_t, pos});
    }
    if (!header_seen) throw ParseError(path.string() + ": missing header line");
    return out;
}

}  // namespace arctrack
