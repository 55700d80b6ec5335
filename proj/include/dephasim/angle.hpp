#pragma once

#include <cmath>
#include <numbers>

#include "dephasim/errors.hpp"

namespace dephasim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Two angles closer than this (on the circle) are treated as the same
/// kick value everywhere: atom identity, condition-set membership,
/// support lookups.
inline constexpr double angle_match_tolerance = 1e-9;

/// Wraps an angle to the canonical interval (-pi, pi].
inline double canonical_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidInputError("canonical_angle: angle must be finite");
    }
    double r = std::remainder(theta, two_pi);
    if (r <= -std::numbers::pi) {
        r += two_pi;
    }
    return r;
}

/// Distance between two canonical angles measured around the circle.
inline double circular_distance(double a, double b) {
    double d = std::fabs(a - b);
    if (d > std::numbers::pi) {
        d = two_pi - d;
    }
    return d;
}

inline bool angles_match(double a, double b,
                         double tol = angle_match_tolerance) {
    return circular_distance(a, b) <= tol;
}

}  // namespace dephasim
