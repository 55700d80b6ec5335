#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dephasim/density_matrix.hpp"
#include "dephasim/process.hpp"
#include "dephasim/serialization.hpp"

namespace dephasim {

enum class EngineKind { exact, monte_carlo, both };

inline const char* to_string(EngineKind engine) {
    switch (engine) {
        case EngineKind::exact:
            return "exact";
        case EngineKind::monte_carlo:
            return "monte_carlo";
        default:
            return "both";
    }
}

inline constexpr int scenario_schema_version = 1;

/// One simulation scenario: which noise process to run, the initial
/// state, the engine, and the output location. `trajectories` and
/// `seed` are required whenever the Monte Carlo engine is involved.
struct ScenarioConfig {
    NoiseProcess process = IidGaussianProcess{1.0};
    DensityMatrix initial_state{0.5, {0.5, 0.0}};
    int steps = 0;
    EngineKind engine = EngineKind::exact;
    std::int64_t trajectories = 0;
    std::uint64_t seed = 0;
    std::string output;
    std::int64_t max_kicks = 100'000'000;
};

/// Parses and fully validates a scenario document. Every violated
/// precondition surfaces here, before any computation starts.
inline ScenarioConfig parse_scenario_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") +
                          e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config root must be an object");
    }

    const std::int64_t version =
        detail::require_integer(root, "schema_version", "");
    if (version != scenario_schema_version) {
        throw ConfigError("field \"schema_version\": unsupported version " +
                          std::to_string(version));
    }

    ScenarioConfig config;
    config.process =
        process_from_json(detail::require_field(root, "process", ""),
                          "process");

    const json& state = detail::require_field(root, "initial_state", "");
    const double a = detail::require_number(state, "a", "initial_state");
    const double b_re =
        detail::require_number(state, "b_re", "initial_state");
    const double b_im =
        detail::require_number(state, "b_im", "initial_state");
    try {
        config.initial_state = DensityMatrix(a, {b_re, b_im});
    } catch (const InvalidInputError& e) {
        throw ConfigError(std::string("field \"initial_state\": ") +
                          e.what());
    }

    const std::int64_t steps = detail::require_integer(root, "steps", "");
    if (steps < 0) {
        throw ConfigError("field \"steps\": must be >= 0");
    }
    config.steps = static_cast<int>(steps);

    const std::string engine = detail::require_string(root, "engine", "");
    if (engine == "exact") {
        config.engine = EngineKind::exact;
    } else if (engine == "monte_carlo") {
        config.engine = EngineKind::monte_carlo;
    } else if (engine == "both") {
        config.engine = EngineKind::both;
    } else {
        throw ConfigError(
            "field \"engine\": expected exact, monte_carlo, or both");
    }

    config.output = detail::require_string(root, "output", "");
    if (config.output.empty()) {
        throw ConfigError("field \"output\": must be a non-empty path");
    }

    if (config.engine != EngineKind::exact) {
        config.trajectories =
            detail::require_integer(root, "trajectories", "");
        if (config.trajectories < 1) {
            throw ConfigError("field \"trajectories\": must be >= 1");
        }
        const std::int64_t seed = detail::require_integer(root, "seed", "");
        if (seed < 0) {
            throw ConfigError("field \"seed\": must be >= 0");
        }
        config.seed = static_cast<std::uint64_t>(seed);
        if (config.steps < 1) {
            throw ConfigError(
                "field \"steps\": must be >= 1 for the Monte Carlo engine");
        }
    }

    if (root.contains("max_kicks")) {
        config.max_kicks = detail::require_integer(root, "max_kicks", "");
        if (config.max_kicks < 1) {
            throw ConfigError("field \"max_kicks\": must be >= 1");
        }
    }
    return config;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_config(text.str());
}

}  // namespace dephasim
