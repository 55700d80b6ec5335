#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dephasim/errors.hpp"
#include "dephasim/exact.hpp"
#include "dephasim/kernel.hpp"
#include "dephasim/trace.hpp"

namespace dephasim {

enum class DecayModel {
    linear_exponent,    // |f_k| = e^{-lambda k}
    quadratic_exponent  // |f_k| = e^{-lambda k^2}
};

inline const char* to_string(DecayModel model) {
    return model == DecayModel::linear_exponent ? "linear" : "quadratic";
}

struct DecayFit {
    DecayModel model = DecayModel::linear_exponent;
    double rate = 0.0;             // fitted lambda, >= 0
    double per_step_factor = 1.0;  // e^{-rate}; the gamma of a linear fit
    double phase_per_step = 0.0;   // slope of the unwrapped factor phase
    double sse_linear = 0.0;
    double sse_quadratic = 0.0;
    int points_used = 0;

    double sse() const {
        return model == DecayModel::linear_exponent ? sse_linear
                                                    : sse_quadratic;
    }
};

/// Noise-floor rule: points are dropped once the factor magnitude falls
/// under 5 standard errors (or under 1e-13 absolute).
inline constexpr double fit_noise_floor = 1e-13;
inline constexpr double fit_stderr_multiple = 5.0;

/// Single-parameter least-squares fit of ln|f_k| against -lambda*k and
/// -lambda*k^2, both through the origin (f_0 = 1 by construction; the
/// k = 0 point is excluded). The model with the smaller SSE wins.
inline DecayFit fit_decay(const CoherenceTrace& trace) {
    std::vector<double> ks;
    std::vector<double> log_mags;
    std::vector<double> phases;
    double previous_phase = 0.0;
    for (const auto& step : trace.steps) {
        if (step.step == 0) {
            continue;
        }
        const double mag = std::abs(step.factor);
        if (mag <= fit_noise_floor) {
            continue;
        }
        if (step.se &&
            mag <= fit_stderr_multiple * step.se->magnitude()) {
            continue;
        }
        ks.push_back(static_cast<double>(step.step));
        log_mags.push_back(std::log(mag));
        // unwrap the phase against the previous usable point
        double phase = std::arg(step.factor);
        while (phase - previous_phase > std::numbers::pi) {
            phase -= two_pi;
        }
        while (phase - previous_phase < -std::numbers::pi) {
            phase += two_pi;
        }
        phases.push_back(phase);
        previous_phase = phase;
    }
    if (ks.size() < 3) {
        throw InsufficientDataError(
            "fit_decay: fewer than 3 usable trace points");
    }

    double sum_k2 = 0.0, sum_k4 = 0.0;
    double sum_ky = 0.0, sum_k2y = 0.0, sum_kp = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double k = ks[i];
        const double k2 = k * k;
        sum_k2 += k2;
        sum_k4 += k2 * k2;
        sum_ky += k * log_mags[i];
        sum_k2y += k2 * log_mags[i];
        sum_kp += k * phases[i];
    }
    const double lambda_linear = -sum_ky / sum_k2;
    const double lambda_quadratic = -sum_k2y / sum_k4;

    double sse_linear = 0.0, sse_quadratic = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double k = ks[i];
        const double r_lin = log_mags[i] + lambda_linear * k;
        const double r_quad = log_mags[i] + lambda_quadratic * k * k;
        sse_linear += r_lin * r_lin;
        sse_quadratic += r_quad * r_quad;
    }

    DecayFit fit;
    fit.model = sse_linear <= sse_quadratic ? DecayModel::linear_exponent
                                            : DecayModel::quadratic_exponent;
    const double lambda = fit.model == DecayModel::linear_exponent
                              ? lambda_linear
                              : lambda_quadratic;
    fit.rate = std::max(0.0, lambda);
    fit.per_step_factor = std::exp(-fit.rate);
    fit.phase_per_step = sum_kp / sum_k2;
    fit.sse_linear = sse_linear;
    fit.sse_quadratic = sse_quadratic;
    fit.points_used = static_cast<int>(ks.size());
    return fit;
}

struct ParrondoReport {
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gamma_mixed = 0.0;
    double improvement = 0.0;  // gamma_mixed - max(gamma_a, gamma_b)
    double tolerance = 0.0;
    bool verdict = false;
    DecayFit fit_a;
    DecayFit fit_b;
    DecayFit fit_mixed;
};

inline constexpr double parrondo_default_tolerance = 1e-6;

/// Compares each private bath against their random mixture: propagates
/// kernel A alone, kernel B alone, and the weight_a/(1-weight_a) mixed
/// kernel, fits the per-step decay factor of each, and reports whether
/// mixing beats both ingredients by more than `tolerance`.
inline ParrondoReport parrondo_report(
    const MarkovKickKernel& kernel_a, const MarkovKickKernel& kernel_b,
    double weight_a, double initial_a, double initial_b, int n,
    double tolerance = parrondo_default_tolerance) {
    if (n < 10) {
        throw InsufficientDataError(
            "parrondo_report: need n >= 10 steps to fit the decay factors");
    }
    if (!(weight_a >= 0.0 && weight_a <= 1.0)) {
        throw InvalidInputError(
            "parrondo_report: weight_a must lie in [0, 1]");
    }
    ParrondoReport report;
    report.tolerance = tolerance;
    report.fit_a = fit_decay(propagate_markov(kernel_a, initial_a, n));
    report.fit_b = fit_decay(propagate_markov(kernel_b, initial_b, n));
    const MarkovKickKernel mixed =
        mix_kernels({{kernel_a, weight_a}, {kernel_b, 1.0 - weight_a}});
    report.fit_mixed = fit_decay(propagate_markov(mixed, initial_a, n));
    report.gamma_a = report.fit_a.per_step_factor;
    report.gamma_b = report.fit_b.per_step_factor;
    report.gamma_mixed = report.fit_mixed.per_step_factor;
    report.improvement =
        report.gamma_mixed - std::max(report.gamma_a, report.gamma_b);
    report.verdict = report.improvement > tolerance;
    return report;
}

}  // namespace dephasim
