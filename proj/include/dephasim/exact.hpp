#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <utility>
#include <vector>

#include "dephasim/density_matrix.hpp"
#include "dephasim/distribution.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/kernel.hpp"
#include "dephasim/process.hpp"
#include "dephasim/trace.hpp"

namespace dephasim {

/// E[e^{i theta}] of a finite kick mixture; always inside the unit disk.
inline std::complex<double> characteristic_value(
    const DiscreteDistribution& dist) {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& atom : dist.atoms()) {
        sum += atom.weight * std::polar(1.0, atom.angle);
    }
    return sum;
}

/// n independent Gaussian kicks of variance 2*lambda: factor e^{-n lambda}.
inline double coherence_factor_iid_gaussian(double lambda, int n) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        throw InvalidInputError(
            "coherence_factor_iid_gaussian: lambda must be > 0");
    }
    if (n < 0) {
        throw InvalidInputError(
            "coherence_factor_iid_gaussian: n must be >= 0");
    }
    return std::exp(-static_cast<double>(n) * lambda);
}

/// One Gaussian kick repeated n times: the net angle n*theta has
/// variance 2*lambda*n^2, so the factor is e^{-n^2 lambda}.
inline double coherence_factor_fully_correlated(double lambda, int n) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        throw InvalidInputError(
            "coherence_factor_fully_correlated: lambda must be > 0");
    }
    if (n < 0) {
        throw InvalidInputError(
            "coherence_factor_fully_correlated: n must be >= 0");
    }
    const double steps = static_cast<double>(n);
    return std::exp(-steps * steps * lambda);
}

/// Closure of the initial angle's emission atoms under repeated kernel
/// application: every angle a trajectory can visit. Sorted ascending.
inline std::vector<double> reachable_support(const MarkovKickKernel& kernel,
                                             double initial_angle) {
    std::vector<double> support;
    auto known = [&support](double angle) {
        for (double seen : support) {
            if (angles_match(seen, angle)) {
                return true;
            }
        }
        return false;
    };
    std::deque<double> frontier;
    for (const auto& atom : kernel.emission_for(initial_angle).atoms()) {
        if (!known(atom.angle)) {
            support.push_back(atom.angle);
            frontier.push_back(atom.angle);
        }
    }
    while (!frontier.empty()) {
        const double angle = frontier.front();
        frontier.pop_front();
        for (const auto& atom : kernel.emission_for(angle).atoms()) {
            if (!known(atom.angle)) {
                support.push_back(atom.angle);
                frontier.push_back(atom.angle);
            }
        }
    }
    std::sort(support.begin(), support.end());
    return support;
}

namespace detail {

/// Angle set the recursion is evaluated over: the emission closure of
/// {initial} union all condition-set angles. Closing over the condition
/// angles too keeps every f_k lookup inside the table even for branches
/// a trajectory from `initial` can never reach.
inline std::vector<double> recursion_support(const MarkovKickKernel& kernel,
                                             double initial_angle) {
    std::vector<double> support;
    auto known = [&support](double angle) {
        for (double seen : support) {
            if (angles_match(seen, angle)) {
                return true;
            }
        }
        return false;
    };
    std::deque<double> frontier;
    auto push = [&](double angle) {
        if (!known(angle)) {
            support.push_back(angle);
            frontier.push_back(angle);
        }
    };
    push(canonical_angle(initial_angle));
    for (const auto& branch : kernel.branches()) {
        for (double angle : branch.condition) {
            push(angle);
        }
    }
    while (!frontier.empty()) {
        const double angle = frontier.front();
        frontier.pop_front();
        for (const auto& atom : kernel.emission_for(angle).atoms()) {
            push(atom.angle);
        }
    }
    std::sort(support.begin(), support.end());
    return support;
}

}  // namespace detail

/// Evaluates the coherence recursion
///     f_1(theta)     = sum_phi e^{i phi} P(phi | theta)
///     f_{k+1}(theta) = sum_phi e^{i phi} f_k(phi) P(phi | theta)
/// over the full recursion support, returning the table for each
/// k = 1..n. No analytic cancellation is applied anywhere; opposing
/// phases must cancel numerically.
inline std::vector<CoherenceFactorTable> coherence_factor_tables(
    const MarkovKickKernel& kernel, double initial_angle, int n) {
    if (n < 0) {
        throw InvalidInputError("coherence_factor_tables: n must be >= 0");
    }
    const std::vector<double> support =
        detail::recursion_support(kernel, initial_angle);
    const std::size_t size = support.size();

    // per support angle: the emission expanded to (support index,
    // weight * e^{i atom angle}) terms
    struct Term {
        std::size_t index;
        std::complex<double> coefficient;
    };
    std::vector<std::vector<Term>> transitions(size);
    for (std::size_t i = 0; i < size; ++i) {
        const DiscreteDistribution& emission = kernel.emission_for(support[i]);
        transitions[i].reserve(emission.atoms().size());
        for (const auto& atom : emission.atoms()) {
            std::size_t target = size;
            for (std::size_t j = 0; j < size; ++j) {
                if (angles_match(support[j], atom.angle)) {
                    target = j;
                    break;
                }
            }
            if (target == size) {
                throw Error(
                    "coherence_factor_tables: support closure missed an atom");
            }
            transitions[i].push_back(
                {target, atom.weight * std::polar(1.0, atom.angle)});
        }
    }

    std::vector<CoherenceFactorTable> tables;
    tables.reserve(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> current(size, {1.0, 0.0});  // f_0 == 1
    std::vector<std::complex<double>> next(size);
    for (int k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < size; ++i) {
            std::complex<double> sum{0.0, 0.0};
            for (const auto& term : transitions[i]) {
                sum += term.coefficient * current[term.index];
            }
            next[i] = sum;
        }
        current.swap(next);
        tables.push_back({k, support, current});
    }
    return tables;
}

/// Trace of the multiplier applied to the coherence b after each step:
/// step k carries conj(f_k(initial_angle)).
inline CoherenceTrace propagate_markov(const MarkovKickKernel& kernel,
                                       double initial_angle, int n) {
    CoherenceTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(n) + 1);
    trace.steps.push_back({0, {1.0, 0.0}, std::nullopt});
    const double initial = canonical_angle(initial_angle);
    for (const auto& table : coherence_factor_tables(kernel, initial, n)) {
        trace.steps.push_back(
            {table.step_index, std::conj(table.value_at(initial)),
             std::nullopt});
    }
    return trace;
}

inline constexpr int max_enumeration_steps = 12;

/// Brute-force n-step coherence factor: the sum over every length-n
/// atom sequence of (product of conditional weights) * e^{i sum of
/// angles}. Exponential in n, so refuses past max_enumeration_steps.
/// Independent route to the same value as the recursion.
inline std::complex<double> enumerate_exact(const MarkovKickKernel& kernel,
                                            double initial_angle, int n) {
    if (n < 0) {
        throw InvalidInputError("enumerate_exact: n must be >= 0");
    }
    if (n > max_enumeration_steps) {
        throw ResourceLimitError(
            "enumerate_exact: n exceeds the enumeration cap of 12 steps");
    }
    std::complex<double> sum{0.0, 0.0};
    auto walk = [&](auto&& self, double previous, double probability,
                    double angle_sum, int remaining) -> void {
        if (remaining == 0) {
            sum += probability * std::polar(1.0, angle_sum);
            return;
        }
        for (const auto& atom : kernel.emission_for(previous).atoms()) {
            self(self, atom.angle, probability * atom.weight,
                 angle_sum + atom.angle, remaining - 1);
        }
    };
    walk(walk, canonical_angle(initial_angle), 1.0, 0.0, n);
    return sum;
}

/// Deterministic propagation of a noise process: closed forms for the
/// Gaussian cases, the recursion for kernel-driven processes (a mixture
/// is first collapsed to its algebraically mixed kernel). Returns the
/// per-step trace and the dephased final state.
inline std::pair<CoherenceTrace, DensityMatrix> exact_trace(
    const NoiseProcess& process, const DensityMatrix& initial_state, int n) {
    if (n < 0) {
        throw InvalidInputError("exact_trace: n must be >= 0");
    }
    validate(process);

    CoherenceTrace trace = std::visit(
        [n](const auto& p) -> CoherenceTrace {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IidGaussianProcess>) {
                CoherenceTrace t;
                for (int k = 0; k <= n; ++k) {
                    t.steps.push_back(
                        {k, {coherence_factor_iid_gaussian(p.lambda, k), 0.0},
                         std::nullopt});
                }
                return t;
            } else if constexpr (std::is_same_v<
                                     T, FullyCorrelatedGaussianProcess>) {
                CoherenceTrace t;
                for (int k = 0; k <= n; ++k) {
                    t.steps.push_back(
                        {k,
                         {coherence_factor_fully_correlated(p.lambda, k), 0.0},
                         std::nullopt});
                }
                return t;
            } else if constexpr (std::is_same_v<T, IidDiscreteProcess>) {
                // i.i.d. == one-step kernel with only a default emission
                MarkovKickKernel kernel({}, p.dist);
                return propagate_markov(kernel, 0.0, n);
            } else if constexpr (std::is_same_v<T, MarkovProcess>) {
                return propagate_markov(p.kernel, p.initial_angle, n);
            } else {
                return propagate_markov(mix_kernels(p.components),
                                        p.initial_angle, n);
            }
        },
        process);

    DensityMatrix final_state =
        dephase(initial_state, trace.steps.back().factor);
    return {std::move(trace), std::move(final_state)};
}

}  // namespace dephasim
