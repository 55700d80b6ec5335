#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "dephasim/angle.hpp"
#include "dephasim/errors.hpp"

namespace dephasim {

/// Standard error of an estimated coherence factor, one value per
/// real/imaginary component. Exact engines leave it absent.
struct StepError {
    double re = 0.0;
    double im = 0.0;

    double magnitude() const { return std::hypot(re, im); }
};

/// Coherence factor after `step` kicks: the complex multiplier that has
/// been applied to the initial coherence b.
struct TraceStep {
    int step = 0;
    std::complex<double> factor{1.0, 0.0};
    std::optional<StepError> se;
};

/// Per-step history of the coherence multiplier, starting at step 0
/// with factor exactly one.
struct CoherenceTrace {
    std::vector<TraceStep> steps;

    const TraceStep& at(int step) const {
        for (const auto& s : steps) {
            if (s.step == step) {
                return s;
            }
        }
        throw InvalidInputError("CoherenceTrace: step not present");
    }
};

/// Values of the coherence recursion f_k over its angle support after a
/// fixed number of steps k.
struct CoherenceFactorTable {
    int step_index = 0;
    std::vector<double> support;                // sorted canonical angles
    std::vector<std::complex<double>> values;   // aligned with support

    std::complex<double> value_at(double angle) const {
        const double c = canonical_angle(angle);
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (angles_match(support[i], c)) {
                return values[i];
            }
        }
        throw InvalidInputError(
            "CoherenceFactorTable: angle outside support");
    }

    double max_magnitude() const {
        double best = 0.0;
        for (const auto& v : values) {
            best = std::max(best, std::abs(v));
        }
        return best;
    }
};

}  // namespace dephasim
