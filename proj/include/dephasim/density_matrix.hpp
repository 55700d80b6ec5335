#pragma once

#include <cmath>
#include <complex>

#include "dephasim/errors.hpp"

namespace dephasim {

/// Single-qubit density matrix restricted to the phase-damping setting:
/// populations never change, so the state is stored as the |0> population
/// `a` and the off-diagonal coherence `b` (row 0, column 1). The |1>
/// population is always 1 - a, which keeps the trace pinned to one.
///
/// Phase convention used project-wide: a phase kick by angle theta is
/// diag(e^{-i theta/2}, e^{+i theta/2}), so the coherence picks up
/// e^{-i theta}.
class DensityMatrix {
public:
    static constexpr double trace_tolerance = 1e-12;
    static constexpr double positivity_tolerance = 1e-12;

    DensityMatrix(double a, std::complex<double> b) : a_(a), b_(b) {
        validate();
    }

    /// Accepts an explicit |1> population and renormalizes the trace,
    /// provided a + d is already within tolerance of one.
    DensityMatrix(double a, std::complex<double> b, double d) : a_(a), b_(b) {
        const double trace = a + d;
        if (!std::isfinite(trace) || std::fabs(trace - 1.0) > trace_tolerance) {
            throw InvalidInputError("DensityMatrix: trace a + d must equal 1");
        }
        a_ = a / trace;
        validate();
    }

    double a() const { return a_; }
    double d() const { return 1.0 - a_; }
    std::complex<double> b() const { return b_; }

private:
    void validate() const {
        if (!std::isfinite(a_) || !std::isfinite(b_.real()) ||
            !std::isfinite(b_.imag())) {
            throw InvalidInputError("DensityMatrix: entries must be finite");
        }
        if (a_ < 0.0 || a_ > 1.0) {
            throw InvalidInputError("DensityMatrix: population out of [0, 1]");
        }
        if (a_ * (1.0 - a_) - std::norm(b_) < -positivity_tolerance) {
            throw InvalidInputError("DensityMatrix: not positive semidefinite");
        }
    }

    double a_;
    std::complex<double> b_;
};

/// One phase kick: populations untouched, coherence rotated by e^{-i theta}.
inline DensityMatrix apply_phase_rotation(const DensityMatrix& state,
                                          double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidInputError("apply_phase_rotation: angle must be finite");
    }
    return {state.a(), state.b() * std::polar(1.0, -theta)};
}

/// Multiplies the coherence by an averaged factor with |factor| <= 1.
/// Factors a hair above one (rounding) are rescaled onto the unit disk;
/// anything larger would un-dephase the state and is rejected.
inline DensityMatrix dephase(const DensityMatrix& state,
                             std::complex<double> factor) {
    const double mag = std::abs(factor);
    if (!(mag <= 1.0 + 1e-12)) {
        throw InvalidInputError("dephase: |factor| must not exceed 1");
    }
    if (mag > 1.0) {
        factor /= mag;
    }
    return {state.a(), factor * state.b()};
}

inline double coherence_magnitude(const DensityMatrix& state) {
    return std::abs(state.b());
}

/// tr(rho^2) = a^2 + d^2 + 2|b|^2; lies in [1/2, 1] for valid states.
inline double purity(const DensityMatrix& state) {
    const double d = state.d();
    return state.a() * state.a() + d * d + 2.0 * std::norm(state.b());
}

}  // namespace dephasim
