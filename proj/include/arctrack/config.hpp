#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "arctrack/errors.hpp"
#include "arctrack/pipeline.hpp"

namespace arctrack {

namespace config_detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

inline double number_at(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
    return obj[key].get<double>();
}

inline Mat2 matrix_from(const json& j, const std::string& where) {
    if (j.is_number()) {
        const double v = j.get<double>();
        return Mat2::diagonal(v, v);
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Mat2::diagonal(j[0].get<double>(), j[1].get<double>());
    }
    if (j.is_array() && j.size() == 2 && j[0].is_array() && j[1].is_array() &&
        j[0].size() == 2 && j[1].size() == 2) {
        return {j[0][0].get<double>(), j[0][1].get<double>(),
                j[1][0].get<double>(), j[1][1].get<double>()};
    }
    throw ConfigError("config: " + where + " must be a number, [d0,d1], or [[a,b],[c,d]]");
}

inline ScenarioConfig scenario_from(const json& j) {
    check_keys(j, {"kind", "center", "radius", "halfwidth", "speed", "param_rate", "phase0",
                   "dt", "steps", "noise_sigma", "dropout_prob", "seed"},
               "scenario");
    ScenarioConfig cfg;
    const std::string kind = j.value("kind", std::string("circle"));
    if (kind == "circle") {
        cfg.kind = ScenarioKind::circle;
    } else if (kind == "lemniscate") {
        cfg.kind = ScenarioKind::lemniscate;
        cfg.speed = 0.25;  // parameter rate [rad/s]
    } else {
        throw ConfigError("config: scenario.kind must be 'circle' or 'lemniscate'");
    }
    if (j.contains("center")) {
        const json& c = j["center"];
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
            throw ConfigError("config: scenario.center must be [east, north]");
        }
        cfg.center = {c[0].get<double>(), c[1].get<double>()};
    }
    if (j.contains("radius") && j.contains("halfwidth")) {
        throw ConfigError("config: give scenario.radius or scenario.halfwidth, not both");
    }
    cfg.radius = number_at(j, "radius", number_at(j, "halfwidth", cfg.radius));
    if (j.contains("speed") && j.contains("param_rate")) {
        throw ConfigError("config: give scenario.speed or scenario.param_rate, not both");
    }
    cfg.speed = number_at(j, "speed", number_at(j, "param_rate", cfg.speed));
    cfg.phase0 = number_at(j, "phase0", cfg.phase0);
    cfg.dt = number_at(j, "dt", cfg.dt);
    if (j.contains("steps")) {
        if (!j["steps"].is_number_unsigned()) {
            throw ConfigError("config: scenario.steps must be a non-negative integer");
        }
        cfg.steps = j["steps"].get<std::size_t>();
    }
    cfg.noise_sigma = number_at(j, "noise_sigma", cfg.noise_sigma);
    cfg.dropout_prob = number_at(j, "dropout_prob", cfg.dropout_prob);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) {
            throw ConfigError("config: scenario.seed must be a non-negative integer");
        }
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    return cfg;
}

inline WindowInput window_input_from(const json& j, const std::string& where) {
    const std::string v = j.get<std::string>();
    if (v == "filtered") return WindowInput::filtered;
    if (v == "raw") return WindowInput::raw;
    throw ConfigError("config: " + where + " must be 'filtered' or 'raw'");
}

inline RunConfig run_config_from(const json& root) {
    check_keys(root, {"scenario", "input", "noise", "evolution", "prediction", "center_mode",
                      "out"},
               "the top level");
    RunConfig cfg;
    if (root.contains("scenario") && root.contains("input")) {
        throw ConfigError("config: give 'scenario' or 'input', not both");
    }
    if (root.contains("input")) {
        cfg.scenario.reset();
        cfg.input_path = root["input"].get<std::string>();
    } else if (root.contains("scenario")) {
        cfg.scenario = scenario_from(root["scenario"]);
    }

    if (root.contains("noise")) {
        const json& n = root["noise"];
        check_keys(n, {"q", "r", "r_amplification", "p0_scale", "joseph_update"}, "noise");
        if (n.contains("q")) cfg.process_noise = matrix_from(n["q"], "noise.q");
        if (n.contains("r")) cfg.measurement_noise = matrix_from(n["r"], "noise.r");
        cfg.r_amplification = number_at(n, "r_amplification", cfg.r_amplification);
        cfg.p0_scale = number_at(n, "p0_scale", cfg.p0_scale);
        if (n.value("joseph_update", false)) cfg.update_form = CovUpdate::joseph;
    }

    if (root.contains("evolution")) {
        const json& e = root["evolution"];
        check_keys(e, {"window", "stride", "input"}, "evolution");
        if (e.contains("window")) cfg.evolution_window = e["window"].get<std::size_t>();
        if (e.contains("stride")) cfg.evolution_stride = e["stride"].get<std::size_t>();
        if (e.contains("input")) cfg.evolution_input = window_input_from(e["input"], "evolution.input");
    }

    if (root.contains("prediction")) {
        const json& p = root["prediction"];
        check_keys(p, {"window", "horizon", "step_dt", "mode", "input"}, "prediction");
        if (p.contains("window")) cfg.prediction.window_len = p["window"].get<std::size_t>();
        if (p.contains("horizon")) cfg.prediction.horizon_steps = p["horizon"].get<std::size_t>();
        if (p.contains("step_dt")) cfg.prediction_step_dt = p["step_dt"].get<double>();
        if (p.contains("mode")) {
            const std::string m = p["mode"].get<std::string>();
            if (m == "chord") {
                cfg.prediction.mode = PropagationMode::chord_rotation;
            } else if (m == "arc") {
                cfg.prediction.mode = PropagationMode::arc_length;
            } else {
                throw ConfigError("config: prediction.mode must be 'chord' or 'arc'");
            }
        }
        if (p.contains("input")) {
            cfg.prediction_input = window_input_from(p["input"], "prediction.input");
        }
    }

    if (root.contains("center_mode")) {
        const std::string m = root["center_mode"].get<std::string>();
        if (m == "raw") {
            cfg.center_mode = CenterMode::raw;
        } else if (m == "midpoint_corrected") {
            cfg.center_mode = CenterMode::midpoint_corrected;
        } else {
            throw ConfigError("config: center_mode must be 'raw' or 'midpoint_corrected'");
        }
    }

    if (root.contains("out")) cfg.out_dir = root["out"].get<std::string>();
    return cfg;
}

}  // namespace config_detail

/// Parse a JSON run configuration. Every field has a default, so
/// {"scenario":{"kind":"circle"}} (or even {}) is a valid document.
inline RunConfig parse_run_config(const std::string& text) {
    config_detail::json root;
    try {
        root = config_detail::json::parse(text);
    } catch (const config_detail::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    try {
        return config_detail::run_config_from(root);
    } catch (const config_detail::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open config file " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_run_config(text);
}

}  // namespace arctrack
