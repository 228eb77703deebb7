// arctrack: estimate and predict planar target tracks from noisy position
// measurements; simulate scenarios, replay CSV files, report metrics.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arctrack/arctrack.hpp"
#include "arctrack/config.hpp"

namespace {

using namespace arctrack;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

void print_metrics(const MetricsReport& m) {
    std::printf("rmse_raw       %.6g m\n", m.rmse_raw);
    std::printf("rmse_filtered  %.6g m\n", m.rmse_filtered);
    std::printf("dropout_count  %zu\n", m.dropout_count);
    if (!m.prediction_error_by_horizon.empty()) {
        std::printf("prediction error by horizon (step, mean m, max m):\n");
        for (const HorizonError& h : m.prediction_error_by_horizon) {
            std::printf("  %3zu  %.6g  %.6g\n", h.step, h.mean, h.max);
        }
    }
}

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string input;        // filter/predict positional
    std::string track_file;   // report positional
    std::string pred_file;    // report positional (optional)
};

RunConfig make_config(const CliOptions& opt, bool replay) {
    RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = load_run_config(opt.config_path);
    } else if (replay) {
        cfg.scenario.reset();
    }
    if (!opt.input.empty()) {
        cfg.scenario.reset();
        cfg.input_path = opt.input;
    }
    if (opt.seed) {
        if (!cfg.scenario) throw ConfigError("--seed requires a scenario configuration");
        cfg.scenario->seed = *opt.seed;
    }
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    return cfg;
}

int run_simulate(const CliOptions& opt) {
    const RunConfig cfg = make_config(opt, false);
    if (!cfg.scenario) throw ConfigError("simulate requires a scenario configuration");
    const MetricsReport metrics = run_scenario(cfg);
    std::printf("wrote %s and %s\n",
                (std::filesystem::path(cfg.out_dir) / "track.csv").c_str(),
                (std::filesystem::path(cfg.out_dir) / "predictions.csv").c_str());
    print_metrics(metrics);
    return 0;
}

int run_filter(const CliOptions& opt) {
    const RunConfig cfg = make_config(opt, true);
    if (!cfg.input_path) throw ConfigError("filter requires an input track file");
    const auto samples = load_samples(cfg);
    const RunArtifacts art = run_track(samples, cfg);

    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "track.csv";
    write_track_csv(path, art.rows);
    std::printf("wrote %s\n", path.c_str());
    if (art.metrics) print_metrics(*art.metrics);
    return 0;
}

int run_predict(const CliOptions& opt) {
    const RunConfig cfg = make_config(opt, true);
    if (!cfg.input_path) throw ConfigError("predict requires an input track file");
    const auto samples = load_samples(cfg);
    const RunArtifacts art = run_track(samples, cfg);

    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "predictions.csv";
    write_predictions_csv(path, art.predictions);
    std::printf("wrote %s (%zu predictions)\n", path.c_str(), art.predictions.size());
    if (art.metrics) print_metrics(*art.metrics);
    return 0;
}

int run_report(const CliOptions& opt) {
    const std::vector<TrackRow> rows = read_track_csv(opt.track_file);

    MetricsReport report;
    std::vector<Vec2> truth, meas, filt;
    std::vector<TrackSample> samples;
    for (const TrackRow& r : rows) {
        if (r.dropped()) ++report.dropout_count;
        samples.push_back({r.t, r.truth, r.meas});
        if (r.truth && r.meas && r.filt) {
            truth.push_back(*r.truth);
            meas.push_back(*r.meas);
            filt.push_back(*r.filt);
        }
    }
    if (truth.empty()) {
        throw ParseError(opt.track_file +
                         ": report needs rows with truth, measurement, and filtered columns");
    }
    report.rmse_raw = rmse(meas, truth);
    report.rmse_filtered = rmse(filt, truth);

    if (!opt.pred_file.empty()) {
        const auto predictions = read_predictions_csv(opt.pred_file);
        std::vector<PredictedTrajectory> scorable;
        for (const PredictedTrajectory& p : predictions) {
            if (!p.points.empty() && p.points.back().t <= rows.back().t + kDtTolerance) {
                scorable.push_back(p);
            }
        }
        report.prediction_error_by_horizon = prediction_error_profile(scorable, samples);
    }
    print_metrics(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar target tracking: coordinated-turn EKF + trajectory prediction"};
    app.require_subcommand(1);

    CliOptions opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON run configuration");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "override the scenario RNG seed");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario, write CSVs + metrics");
    add_common(simulate);

    CLI::App* filter = app.add_subcommand("filter", "replay a track file through the filter");
    filter->add_option("input", opt.input, "track CSV with measurement columns");
    add_common(filter);

    CLI::App* predict = app.add_subcommand("predict", "replay a track file, write predictions");
    predict->add_option("input", opt.input, "track CSV with measurement columns");
    add_common(predict);

    CLI::App* report = app.add_subcommand("report", "compute metrics from output files");
    report->add_option("track", opt.track_file, "track CSV")->required();
    report->add_option("predictions", opt.pred_file, "prediction CSV");
    add_common(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(opt);
        if (filter->parsed()) return run_filter(opt);
        if (predict->parsed()) return run_predict(opt);
        return run_report(opt);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitIo;
    } catch (const NonMonotoneTime& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
