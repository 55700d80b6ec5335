#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dephasim/distribution.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/kernel.hpp"
#include "dephasim/process.hpp"

namespace dephasim {

using json = nlohmann::json;

namespace detail {

inline std::string join_path(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

inline const json& require_field(const json& object, const char* key,
                                 const std::string& path) {
    if (!object.is_object()) {
        throw ConfigError("field \"" + path + "\": expected an object");
    }
    const auto it = object.find(key);
    if (it == object.end()) {
        throw ConfigError("missing required field \"" +
                          join_path(path, key) + "\"");
    }
    return *it;
}

inline double require_number(const json& object, const char* key,
                             const std::string& path) {
    const json& value = require_field(object, key, path);
    if (!value.is_number()) {
        throw ConfigError("field \"" + join_path(path, key) +
                          "\": expected a number");
    }
    return value.get<double>();
}

inline std::int64_t require_integer(const json& object, const char* key,
                                    const std::string& path) {
    const json& value = require_field(object, key, path);
    if (!value.is_number_integer()) {
        throw ConfigError("field \"" + join_path(path, key) +
                          "\": expected an integer");
    }
    return value.get<std::int64_t>();
}

inline std::string require_string(const json& object, const char* key,
                                  const std::string& path) {
    const json& value = require_field(object, key, path);
    if (!value.is_string()) {
        throw ConfigError("field \"" + join_path(path, key) +
                          "\": expected a string");
    }
    return value.get<std::string>();
}

inline const json& require_array(const json& object, const char* key,
                                 const std::string& path) {
    const json& value = require_field(object, key, path);
    if (!value.is_array()) {
        throw ConfigError("field \"" + join_path(path, key) +
                          "\": expected an array");
    }
    return value;
}

}  // namespace detail

inline json to_json(const DiscreteDistribution& dist) {
    json atoms = json::array();
    for (const auto& atom : dist.atoms()) {
        atoms.push_back({{"angle", atom.angle}, {"weight", atom.weight}});
    }
    return atoms;
}

inline DiscreteDistribution distribution_from_json(const json& value,
                                                   const std::string& path) {
    if (!value.is_array()) {
        throw ConfigError("field \"" + path + "\": expected an atom array");
    }
    std::vector<KickAtom> atoms;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string entry = path + "[" + std::to_string(i) + "]";
        atoms.push_back(
            {detail::require_number(value[i], "angle", entry),
             detail::require_number(value[i], "weight", entry)});
    }
    try {
        return DiscreteDistribution(std::move(atoms));
    } catch (const InvalidInputError& e) {
        throw ConfigError("field \"" + path + "\": " + e.what());
    }
}

inline json to_json(const MarkovKickKernel& kernel) {
    json branches = json::array();
    for (const auto& branch : kernel.branches()) {
        branches.push_back({{"condition", branch.condition},
                            {"atoms", to_json(branch.emission)}});
    }
    return {{"branches", std::move(branches)},
            {"default", to_json(kernel.default_emission())}};
}

inline MarkovKickKernel kernel_from_json(const json& value,
                                         const std::string& path) {
    const json& branches_json = detail::require_array(value, "branches", path);
    std::vector<KernelBranch> branches;
    for (std::size_t i = 0; i < branches_json.size(); ++i) {
        const std::string entry =
            path + ".branches[" + std::to_string(i) + "]";
        const json& condition =
            detail::require_array(branches_json[i], "condition", entry);
        std::vector<double> angles;
        for (const auto& angle : condition) {
            if (!angle.is_number()) {
                throw ConfigError("field \"" + entry +
                                  ".condition\": expected numbers");
            }
            angles.push_back(angle.get<double>());
        }
        branches.push_back(
            {std::move(angles),
             distribution_from_json(
                 detail::require_field(branches_json[i], "atoms", entry),
                 entry + ".atoms")});
    }
    DiscreteDistribution default_emission = distribution_from_json(
        detail::require_field(value, "default", path), path + ".default");
    try {
        return MarkovKickKernel(std::move(branches),
                                std::move(default_emission));
    } catch (const InvalidInputError& e) {
        throw ConfigError("field \"" + path + "\": " + e.what());
    }
}

inline json to_json(const NoiseProcess& process) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IidGaussianProcess>) {
                return {{"kind", "iid_gaussian"}, {"lambda", p.lambda}};
            } else if constexpr (std::is_same_v<
                                     T, FullyCorrelatedGaussianProcess>) {
                return {{"kind", "fully_correlated_gaussian"},
                        {"lambda", p.lambda}};
            } else if constexpr (std::is_same_v<T, IidDiscreteProcess>) {
                return {{"kind", "iid_discrete"}, {"atoms", to_json(p.dist)}};
            } else if constexpr (std::is_same_v<T, MarkovProcess>) {
                return {{"kind", "markov"},
                        {"kernel", to_json(p.kernel)},
                        {"initial_angle", p.initial_angle}};
            } else {
                json components = json::array();
                for (const auto& [kernel, weight] : p.components) {
                    components.push_back(
                        {{"kernel", to_json(kernel)}, {"weight", weight}});
                }
                return {{"kind", "mixture"},
                        {"components", std::move(components)},
                        {"initial_angle", p.initial_angle}};
            }
        },
        process);
}

inline NoiseProcess process_from_json(const json& value,
                                      const std::string& path) {
    const std::string kind = detail::require_string(value, "kind", path);
    NoiseProcess process = [&]() -> NoiseProcess {
        if (kind == "iid_gaussian") {
            return IidGaussianProcess{
                detail::require_number(value, "lambda", path)};
        }
        if (kind == "fully_correlated_gaussian") {
            return FullyCorrelatedGaussianProcess{
                detail::require_number(value, "lambda", path)};
        }
        if (kind == "iid_discrete") {
            return IidDiscreteProcess{distribution_from_json(
                detail::require_field(value, "atoms", path), path + ".atoms")};
        }
        if (kind == "markov") {
            return MarkovProcess{
                kernel_from_json(
                    detail::require_field(value, "kernel", path),
                    path + ".kernel"),
                detail::require_number(value, "initial_angle", path)};
        }
        if (kind == "mixture") {
            const json& components_json =
                detail::require_array(value, "components", path);
            std::vector<std::pair<MarkovKickKernel, double>> components;
            for (std::size_t i = 0; i < components_json.size(); ++i) {
                const std::string entry =
                    path + ".components[" + std::to_string(i) + "]";
                components.emplace_back(
                    kernel_from_json(detail::require_field(components_json[i],
                                                           "kernel", entry),
                                     entry + ".kernel"),
                    detail::require_number(components_json[i], "weight",
                                           entry));
            }
            return MixtureProcess{
                std::move(components),
                detail::require_number(value, "initial_angle", path)};
        }
        throw ConfigError("field \"" + detail::join_path(path, "kind") +
                          "\": unknown process kind \"" + kind + "\"");
    }();
    try {
        validate(process);
    } catch (const InvalidInputError& e) {
        throw ConfigError("field \"" + path + "\": " + e.what());
    }
    return process;
}

}  // namespace dephasim
