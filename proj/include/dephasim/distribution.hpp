#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "dephasim/angle.hpp"
#include "dephasim/errors.hpp"

namespace dephasim {

/// One possible kick value: an angle and the probability of drawing it.
struct KickAtom {
    double angle;
    double weight;
};

/// Finite mixture of kick angles. Construction canonicalizes angles to
/// (-pi, pi], drops zero-weight atoms, sorts by angle, and normalizes the
/// weights exactly to one (rejecting inputs whose total is off by more
/// than 1e-12). Atoms must stay pairwise separated by more than the
/// angle-match tolerance, otherwise they would be indistinguishable to
/// every consumer of this type.
class DiscreteDistribution {
public:
    static constexpr double weight_sum_tolerance = 1e-12;

    explicit DiscreteDistribution(std::vector<KickAtom> atoms) {
        double total = 0.0;
        for (auto& atom : atoms) {
            if (!std::isfinite(atom.weight) || atom.weight < 0.0) {
                throw InvalidInputError(
                    "DiscreteDistribution: weights must be finite and >= 0");
            }
            atom.angle = canonical_angle(atom.angle);
            total += atom.weight;
        }
        if (std::fabs(total - 1.0) > weight_sum_tolerance) {
            throw InvalidInputError(
                "DiscreteDistribution: weights must sum to 1");
        }
        atoms_.reserve(atoms.size());
        for (const auto& atom : atoms) {
            if (atom.weight > 0.0) {
                atoms_.push_back({atom.angle, atom.weight / total});
            }
        }
        if (atoms_.empty()) {
            throw InvalidInputError(
                "DiscreteDistribution: at least one atom with positive weight");
        }
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const KickAtom& x, const KickAtom& y) {
                      return x.angle < y.angle;
                  });
        for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
            if (circular_distance(atoms_[i].angle, atoms_[i + 1].angle) <=
                angle_match_tolerance) {
                throw InvalidInputError(
                    "DiscreteDistribution: atom angles must be distinct");
            }
        }
        // sorted order can still wrap around the -pi/pi seam
        if (atoms_.size() > 1 &&
            circular_distance(atoms_.front().angle, atoms_.back().angle) <=
                angle_match_tolerance) {
            throw InvalidInputError(
                "DiscreteDistribution: atom angles must be distinct");
        }
    }

    const std::vector<KickAtom>& atoms() const { return atoms_; }

    /// Index of the atom matching `angle`, or -1 when absent.
    int find_atom(double angle) const {
        const double c = canonical_angle(angle);
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (angles_match(atoms_[i].angle, c)) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    static DiscreteDistribution point_mass(double angle) {
        return DiscreteDistribution({{angle, 1.0}});
    }

    static DiscreteDistribution uniform(std::initializer_list<double> angles) {
        std::vector<KickAtom> atoms;
        const double w = 1.0 / static_cast<double>(angles.size());
        for (double angle : angles) {
            atoms.push_back({angle, w});
        }
        return DiscreteDistribution(std::move(atoms));
    }

private:
    std::vector<KickAtom> atoms_;
};

inline bool operator==(const DiscreteDistribution& lhs,
                       const DiscreteDistribution& rhs) {
    const auto& a = lhs.atoms();
    const auto& b = rhs.atoms();
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!angles_match(a[i].angle, b[i].angle) ||
            std::fabs(a[i].weight - b[i].weight) > 1e-12) {
            return false;
        }
    }
    return true;
}

namespace detail {

/// Merges atoms whose angles coincide within tolerance, adding weights.
/// Input atoms must each carry weight > 0; the group keeps the smallest
/// member angle as its representative.
inline std::vector<KickAtom> merge_atoms(std::vector<KickAtom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const KickAtom& x, const KickAtom& y) {
                  return x.angle < y.angle;
              });
    std::vector<KickAtom> merged;
    for (const auto& atom : atoms) {
        if (!merged.empty() &&
            angles_match(merged.back().angle, atom.angle)) {
            merged.back().weight += atom.weight;
        } else {
            merged.push_back(atom);
        }
    }
    // fold a group that straddles the -pi/pi seam
    if (merged.size() > 1 &&
        angles_match(merged.front().angle, merged.back().angle)) {
        merged.front().weight += merged.back().weight;
        merged.pop_back();
    }
    return merged;
}

}  // namespace detail

}  // namespace dephasim
