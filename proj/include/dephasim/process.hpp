#pragma once

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "dephasim/distribution.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/kernel.hpp"

namespace dephasim {

/// Independent kicks, angle ~ Normal(0, 2*lambda), unwrapped over all
/// of the real line.
struct IidGaussianProcess {
    double lambda;
};

/// Independent kicks drawn from a fixed finite mixture.
struct IidDiscreteProcess {
    DiscreteDistribution dist;
};

/// One Gaussian draw repeated forever: theta_i = theta_1 for all i.
struct FullyCorrelatedGaussianProcess {
    double lambda;
};

/// Kicks driven by a one-step-memory kernel, starting from a
/// deterministic initial conditioning angle.
struct MarkovProcess {
    MarkovKickKernel kernel;
    double initial_angle = 0.0;
};

/// At each step one component kernel is chosen at random (by weight),
/// then its emission is sampled conditioned on the previous angle.
struct MixtureProcess {
    std::vector<std::pair<MarkovKickKernel, double>> components;
    double initial_angle = 0.0;
};

using NoiseProcess =
    std::variant<IidGaussianProcess, IidDiscreteProcess,
                 FullyCorrelatedGaussianProcess, MarkovProcess,
                 MixtureProcess>;

inline void validate(const NoiseProcess& process) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IidGaussianProcess> ||
                          std::is_same_v<T, FullyCorrelatedGaussianProcess>) {
                if (!std::isfinite(p.lambda) || p.lambda <= 0.0) {
                    throw InvalidInputError(
                        "NoiseProcess: lambda must be > 0");
                }
            } else if constexpr (std::is_same_v<T, MarkovProcess>) {
                canonical_angle(p.initial_angle);
            } else if constexpr (std::is_same_v<T, MixtureProcess>) {
                canonical_angle(p.initial_angle);
                if (p.components.empty()) {
                    throw InvalidInputError(
                        "NoiseProcess: mixture needs components");
                }
                double total = 0.0;
                for (const auto& [kernel, weight] : p.components) {
                    if (!std::isfinite(weight) || weight < 0.0) {
                        throw InvalidInputError(
                            "NoiseProcess: mixture weights must be >= 0");
                    }
                    total += weight;
                }
                if (std::fabs(total - 1.0) > 1e-12) {
                    throw InvalidInputError(
                        "NoiseProcess: mixture weights must sum to 1");
                }
            }
        },
        process);
}

}  // namespace dephasim
