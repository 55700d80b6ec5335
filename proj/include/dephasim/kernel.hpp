#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dephasim/angle.hpp"
#include "dephasim/distribution.hpp"
#include "dephasim/errors.hpp"

namespace dephasim {

/// One row of a kick kernel: if the previous angle belongs to
/// `condition`, the next kick is drawn from `emission`.
struct KernelBranch {
    std::vector<double> condition;
    DiscreteDistribution emission;
};

/// One-step-memory kick law P(theta_i | theta_{i-1}): a list of
/// condition-set branches plus a default emission for every other
/// conditioning angle. Condition sets must be pairwise disjoint.
class MarkovKickKernel {
public:
    static constexpr std::size_t no_branch = static_cast<std::size_t>(-1);

    MarkovKickKernel(std::vector<KernelBranch> branches,
                     DiscreteDistribution default_emission)
        : branches_(std::move(branches)),
          default_emission_(std::move(default_emission)) {
        for (auto& branch : branches_) {
            if (branch.condition.empty()) {
                throw InvalidInputError(
                    "MarkovKickKernel: empty condition set");
            }
            for (auto& angle : branch.condition) {
                angle = canonical_angle(angle);
            }
            std::sort(branch.condition.begin(), branch.condition.end());
            branch.condition.erase(
                std::unique(branch.condition.begin(), branch.condition.end(),
                            [](double x, double y) {
                                return angles_match(x, y);
                            }),
                branch.condition.end());
        }
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            for (std::size_t j = i + 1; j < branches_.size(); ++j) {
                for (double x : branches_[i].condition) {
                    for (double y : branches_[j].condition) {
                        if (angles_match(x, y)) {
                            throw InvalidInputError(
                                "MarkovKickKernel: condition sets overlap");
                        }
                    }
                }
            }
        }
    }

    const std::vector<KernelBranch>& branches() const { return branches_; }
    const DiscreteDistribution& default_emission() const {
        return default_emission_;
    }

    /// Index of the branch whose condition set contains `theta_prev`,
    /// or `no_branch` when the default applies.
    std::size_t branch_index_for(double theta_prev) const {
        const double c = canonical_angle(theta_prev);
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            for (double angle : branches_[i].condition) {
                if (angles_match(angle, c)) {
                    return i;
                }
            }
        }
        return no_branch;
    }

    const DiscreteDistribution& emission_for(double theta_prev) const {
        const std::size_t idx = branch_index_for(theta_prev);
        return idx == no_branch ? default_emission_ : branches_[idx].emission;
    }

    /// All distinct atom angles appearing in any emission, sorted.
    std::vector<double> atom_universe() const {
        std::vector<double> universe;
        auto add = [&universe](const DiscreteDistribution& dist) {
            for (const auto& atom : dist.atoms()) {
                bool known = false;
                for (double angle : universe) {
                    if (angles_match(angle, atom.angle)) {
                        known = true;
                        break;
                    }
                }
                if (!known) {
                    universe.push_back(atom.angle);
                }
            }
        };
        for (const auto& branch : branches_) {
            add(branch.emission);
        }
        add(default_emission_);
        std::sort(universe.begin(), universe.end());
        return universe;
    }

private:
    std::vector<KernelBranch> branches_;
    DiscreteDistribution default_emission_;
};

/// Parameters of the two-bath Parrondo construction. `epsilon` is the
/// small marker angle that lets the combined kernel remember which bath
/// acted last; it must clear the angle-match tolerance by a factor of
/// ten so the marker never collides with the zero atom.
struct ParrondoParams {
    double epsilon = 1e-6;
    double weight_a = 0.5;
};

/// Builds the two private-bath kick kernels.
///
/// Kernel A shuffles {-pi/2, 0, +pi/2} uniformly while the previous kick
/// stayed inside that set, and resets to 0 otherwise. Kernel B does the
/// same on {-3pi/4, epsilon, pi/4} with reset angle epsilon. Each alone
/// contracts the coherence by 1/3 per step.
inline std::pair<MarkovKickKernel, MarkovKickKernel> parrondo_pair(
    const ParrondoParams& params) {
    if (!std::isfinite(params.epsilon) || params.epsilon <= 1e-8) {
        throw InvalidInputError(
            "parrondo_pair: epsilon must exceed 1e-8");
    }
    if (!(params.weight_a >= 0.0 && params.weight_a <= 1.0)) {
        throw InvalidInputError(
            "parrondo_pair: weight_a must lie in [0, 1]");
    }
    const double pi = std::numbers::pi;
    MarkovKickKernel a(
        {{{-pi / 2, 0.0, pi / 2},
          DiscreteDistribution::uniform({0.0, -pi / 2, pi / 2})}},
        DiscreteDistribution::point_mass(0.0));
    MarkovKickKernel b(
        {{{-3 * pi / 4, params.epsilon, pi / 4},
          DiscreteDistribution::uniform(
              {params.epsilon, -3 * pi / 4, pi / 4})}},
        DiscreteDistribution::point_mass(params.epsilon));
    return {std::move(a), std::move(b)};
}

/// Pointwise convex combination of kick kernels: for every conditioning
/// angle the mixed emission is the weighted sum of the component
/// emissions. Conditioning angles with identical mixed emissions are
/// grouped into one branch, and branches that reproduce the mixed
/// default are dropped.
inline MarkovKickKernel mix_kernels(
    const std::vector<std::pair<MarkovKickKernel, double>>& components) {
    if (components.size() < 2) {
        throw InvalidInputError("mix_kernels: need at least two components");
    }
    double total = 0.0;
    for (const auto& [kernel, weight] : components) {
        if (!std::isfinite(weight) || weight < 0.0) {
            throw InvalidInputError(
                "mix_kernels: weights must be finite and >= 0");
        }
        total += weight;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw InvalidInputError("mix_kernels: weights must sum to 1");
    }

    auto mixed_emission_for = [&components, total](
                                  double theta) -> DiscreteDistribution {
        std::vector<KickAtom> atoms;
        for (const auto& [kernel, weight] : components) {
            if (weight == 0.0) {
                continue;
            }
            const double w = weight / total;
            for (const auto& atom : kernel.emission_for(theta).atoms()) {
                atoms.push_back({atom.angle, w * atom.weight});
            }
        }
        return DiscreteDistribution(detail::merge_atoms(std::move(atoms)));
    };

    // union of the component condition sets
    std::vector<double> condition_angles;
    for (const auto& [kernel, weight] : components) {
        for (const auto& branch : kernel.branches()) {
            for (double angle : branch.condition) {
                bool known = false;
                for (double seen : condition_angles) {
                    if (angles_match(seen, angle)) {
                        known = true;
                        break;
                    }
                }
                if (!known) {
                    condition_angles.push_back(angle);
                }
            }
        }
    }
    std::sort(condition_angles.begin(), condition_angles.end());

    // mixed default: every component falls through to its own default
    std::vector<KickAtom> default_atoms;
    for (const auto& [kernel, weight] : components) {
        if (weight == 0.0) {
            continue;
        }
        const double w = weight / total;
        for (const auto& atom : kernel.default_emission().atoms()) {
            default_atoms.push_back({atom.angle, w * atom.weight});
        }
    }
    DiscreteDistribution mixed_default(
        detail::merge_atoms(std::move(default_atoms)));

    // group conditioning angles by identical mixed emissions
    std::vector<KernelBranch> branches;
    for (double angle : condition_angles) {
        DiscreteDistribution emission = mixed_emission_for(angle);
        if (emission == mixed_default) {
            continue;
        }
        bool grouped = false;
        for (auto& branch : branches) {
            if (branch.emission == emission) {
                branch.condition.push_back(angle);
                grouped = true;
                break;
            }
        }
        if (!grouped) {
            branches.push_back({{angle}, std::move(emission)});
        }
    }
    return {std::move(branches), std::move(mixed_default)};
}

/// Natural log of the probability that `kernel` emits exactly `angles`,
/// conditioning the first step on `initial_angle`. Returns nullopt when
/// any step's angle is not an atom of the conditioned emission.
inline std::optional<double> trajectory_log_probability(
    const MarkovKickKernel& kernel, double initial_angle,
    std::span<const double> angles) {
    if (angles.empty()) {
        throw InvalidInputError(
            "trajectory_log_probability: empty trajectory");
    }
    double log_prob = 0.0;
    double previous = canonical_angle(initial_angle);
    for (double angle : angles) {
        const DiscreteDistribution& emission = kernel.emission_for(previous);
        const int idx = emission.find_atom(angle);
        if (idx < 0) {
            return std::nullopt;
        }
        const KickAtom& atom =
            emission.atoms()[static_cast<std::size_t>(idx)];
        log_prob += std::log(atom.weight);
        previous = atom.angle;
    }
    return log_prob;
}

}  // namespace dephasim
