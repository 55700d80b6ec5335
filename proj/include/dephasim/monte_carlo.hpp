#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "dephasim/errors.hpp"
#include "dephasim/kernel.hpp"
#include "dephasim/process.hpp"
#include "dephasim/rng.hpp"
#include "dephasim/trace.hpp"

namespace dephasim {

/// Fully general (possibly non-Markov) kick law: maps the angle history
/// theta_1..theta_{i-1} to the distribution of the next angle.
using HistoryRule =
    std::function<DiscreteDistribution(std::span<const double>)>;

/// What to sample: a noise process (or an arbitrary history rule), how
/// many steps and trajectories, and the master seed every substream is
/// derived from. `max_kicks` caps steps * trajectories.
struct SamplerSpec {
    std::variant<NoiseProcess, HistoryRule> source;
    int steps = 1;
    std::int64_t trajectories = 1;
    std::uint64_t seed = 0;
    std::int64_t max_kicks = 100'000'000;
};

struct McEstimate {
    CoherenceTrace trace;
    std::int64_t trajectories_used = 0;
};

namespace detail {

struct Kick {
    double angle;
    std::complex<double> phasor;  // e^{-i angle}
};

inline int sample_atom_index(const DiscreteDistribution& dist, double u) {
    const auto& atoms = dist.atoms();
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        cumulative += atoms[i].weight;
        if (u < cumulative) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(atoms.size()) - 1;
}

inline std::vector<std::complex<double>> atom_phasors(
    const DiscreteDistribution& dist) {
    std::vector<std::complex<double>> phasors;
    phasors.reserve(dist.atoms().size());
    for (const auto& atom : dist.atoms()) {
        phasors.push_back(std::polar(1.0, -atom.angle));
    }
    return phasors;
}

/// Kick phasors precomputed per kernel emission so the sampling loop
/// only multiplies.
struct KernelPhasors {
    std::vector<std::vector<std::complex<double>>> branch_phasors;
    std::vector<std::complex<double>> default_phasors;

    explicit KernelPhasors(const MarkovKickKernel& kernel) {
        branch_phasors.reserve(kernel.branches().size());
        for (const auto& branch : kernel.branches()) {
            branch_phasors.push_back(atom_phasors(branch.emission));
        }
        default_phasors = atom_phasors(kernel.default_emission());
    }

    const std::vector<std::complex<double>>& for_branch(
        std::size_t index) const {
        return index == MarkovKickKernel::no_branch ? default_phasors
                                                    : branch_phasors[index];
    }
};

struct GaussianStepper {
    double sigma;
    Kick next(CounterRng& rng) {
        const double theta = sigma * rng.next_gaussian();
        return {theta, std::polar(1.0, -theta)};
    }
};

struct FullyCorrelatedStepper {
    double sigma;
    bool drawn = false;
    double theta = 0.0;
    std::complex<double> phasor{1.0, 0.0};
    Kick next(CounterRng& rng) {
        if (!drawn) {
            theta = sigma * rng.next_gaussian();
            phasor = std::polar(1.0, -theta);
            drawn = true;
        }
        return {theta, phasor};
    }
};

struct DiscreteStepper {
    const DiscreteDistribution* dist;
    const std::vector<std::complex<double>>* phasors;
    Kick next(CounterRng& rng) {
        const int j = sample_atom_index(*dist, rng.next_unit());
        return {dist->atoms()[static_cast<std::size_t>(j)].angle,
                (*phasors)[static_cast<std::size_t>(j)]};
    }
};

struct MarkovStepper {
    const MarkovKickKernel* kernel;
    const KernelPhasors* phasors;
    double previous;
    Kick next(CounterRng& rng) {
        const std::size_t b = kernel->branch_index_for(previous);
        const DiscreteDistribution& emission =
            b == MarkovKickKernel::no_branch ? kernel->default_emission()
                                             : kernel->branches()[b].emission;
        const int j = sample_atom_index(emission, rng.next_unit());
        previous = emission.atoms()[static_cast<std::size_t>(j)].angle;
        return {previous, phasors->for_branch(b)[static_cast<std::size_t>(j)]};
    }
};

struct MixtureTables {
    std::vector<const MarkovKickKernel*> kernels;
    std::vector<double> cumulative;
    std::vector<KernelPhasors> phasors;

    explicit MixtureTables(const MixtureProcess& process) {
        double cum = 0.0;
        for (const auto& [kernel, weight] : process.components) {
            kernels.push_back(&kernel);
            cum += weight;
            cumulative.push_back(cum);
            phasors.emplace_back(kernel);
        }
    }

    int pick_component(double u) const {
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
            if (u < cumulative[i]) {
                return static_cast<int>(i);
            }
        }
        return static_cast<int>(cumulative.size()) - 1;
    }
};

struct MixtureStepper {
    const MixtureTables* tables;
    double previous;
    Kick next(CounterRng& rng) {
        const auto c =
            static_cast<std::size_t>(tables->pick_component(rng.next_unit()));
        const MarkovKickKernel& kernel = *tables->kernels[c];
        const std::size_t b = kernel.branch_index_for(previous);
        const DiscreteDistribution& emission =
            b == MarkovKickKernel::no_branch ? kernel.default_emission()
                                             : kernel.branches()[b].emission;
        const int j = sample_atom_index(emission, rng.next_unit());
        previous = emission.atoms()[static_cast<std::size_t>(j)].angle;
        return {previous,
                tables->phasors[c].for_branch(b)[static_cast<std::size_t>(j)]};
    }
};

struct HistoryStepper {
    const HistoryRule* rule;
    std::vector<double> history;
    Kick next(CounterRng& rng) {
        const DiscreteDistribution dist =
            (*rule)(std::span<const double>(history));
        const int j = sample_atom_index(dist, rng.next_unit());
        const double angle = dist.atoms()[static_cast<std::size_t>(j)].angle;
        history.push_back(angle);
        return {angle, std::polar(1.0, -angle)};
    }
};

/// Runs every stepper arm through the same callable. The per-arm lookup
/// tables are built here so they outlive the run.
template <class Run>
auto dispatch_steppers(const SamplerSpec& spec, Run&& run) {
    if (const auto* process = std::get_if<NoiseProcess>(&spec.source)) {
        return std::visit(
            [&run](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, IidGaussianProcess>) {
                    const double sigma = std::sqrt(2.0 * p.lambda);
                    return run([sigma] { return GaussianStepper{sigma}; });
                } else if constexpr (std::is_same_v<
                                         T, FullyCorrelatedGaussianProcess>) {
                    const double sigma = std::sqrt(2.0 * p.lambda);
                    return run(
                        [sigma] { return FullyCorrelatedStepper{sigma}; });
                } else if constexpr (std::is_same_v<T, IidDiscreteProcess>) {
                    const auto phasors = atom_phasors(p.dist);
                    return run([&p, &phasors] {
                        return DiscreteStepper{&p.dist, &phasors};
                    });
                } else if constexpr (std::is_same_v<T, MarkovProcess>) {
                    const KernelPhasors table(p.kernel);
                    const double initial = canonical_angle(p.initial_angle);
                    return run([&p, &table, initial] {
                        return MarkovStepper{&p.kernel, &table, initial};
                    });
                } else {
                    const MixtureTables tables(p);
                    const double initial = canonical_angle(p.initial_angle);
                    return run([&tables, initial] {
                        return MixtureStepper{&tables, initial};
                    });
                }
            },
            *process);
    }
    const auto& rule = std::get<HistoryRule>(spec.source);
    return run([&rule] { return HistoryStepper{&rule, {}}; });
}

inline constexpr std::int64_t mc_block_size = 4096;

/// Ensemble average of e^{-i Theta_k} for k = 1..steps. Trajectories are
/// processed in fixed-size blocks; block partial sums are reduced in
/// block order, so the result is bit-identical for any thread count.
template <class StepperFactory>
CoherenceTrace run_trajectories(int steps, std::int64_t trajectories,
                                std::uint64_t seed, unsigned threads,
                                const StepperFactory& factory) {
    const std::int64_t num_blocks =
        (trajectories + mc_block_size - 1) / mc_block_size;
    const std::size_t width = 4 * static_cast<std::size_t>(steps);
    std::vector<std::vector<double>> partials(
        static_cast<std::size_t>(num_blocks));

    std::atomic<std::int64_t> next_block{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        try {
            for (;;) {
                const std::int64_t b = next_block.fetch_add(1);
                if (b >= num_blocks || failed.load()) {
                    break;
                }
                std::vector<double> sums(width, 0.0);
                const std::int64_t begin = b * mc_block_size;
                const std::int64_t end =
                    std::min(trajectories, begin + mc_block_size);
                for (std::int64_t t = begin; t < end; ++t) {
                    CounterRng rng(seed, static_cast<std::uint64_t>(t));
                    auto stepper = factory();
                    std::complex<double> phasor{1.0, 0.0};
                    std::size_t j = 0;
                    for (int k = 0; k < steps; ++k) {
                        phasor *= stepper.next(rng).phasor;
                        const double re = phasor.real();
                        const double im = phasor.imag();
                        sums[j] += re;
                        sums[j + 1] += im;
                        sums[j + 2] += re * re;
                        sums[j + 3] += im * im;
                        j += 4;
                    }
                }
                partials[static_cast<std::size_t>(b)] = std::move(sums);
            }
        } catch (...) {
            if (!failed.exchange(true)) {
                failure = std::current_exception();
            }
        }
    };

    unsigned worker_count =
        threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                     : threads;
    worker_count = static_cast<unsigned>(std::min<std::int64_t>(
        static_cast<std::int64_t>(worker_count), num_blocks));
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (unsigned i = 0; i < worker_count; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }
    if (failed.load()) {
        std::rethrow_exception(failure);
    }

    std::vector<double> totals(width, 0.0);
    for (const auto& block : partials) {
        for (std::size_t j = 0; j < width; ++j) {
            totals[j] += block[j];
        }
    }

    const auto count = static_cast<double>(trajectories);
    CoherenceTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(steps) + 1);
    trace.steps.push_back({0, {1.0, 0.0}, StepError{0.0, 0.0}});
    for (int k = 1; k <= steps; ++k) {
        const std::size_t j = 4 * static_cast<std::size_t>(k - 1);
        const double mean_re = totals[j] / count;
        const double mean_im = totals[j + 1] / count;
        StepError se{0.0, 0.0};
        if (trajectories > 1) {
            const double var_re = std::max(
                0.0, (totals[j + 2] - totals[j] * mean_re) / (count - 1.0));
            const double var_im = std::max(
                0.0,
                (totals[j + 3] - totals[j + 1] * mean_im) / (count - 1.0));
            se = {std::sqrt(var_re / count), std::sqrt(var_im / count)};
        }
        trace.steps.push_back({k, {mean_re, mean_im}, se});
    }
    return trace;
}

inline void validate_spec(const SamplerSpec& spec) {
    if (spec.steps < 1) {
        throw InvalidInputError("SamplerSpec: steps must be >= 1");
    }
    if (spec.trajectories < 1) {
        throw InvalidInputError("SamplerSpec: trajectories must be >= 1");
    }
    if (const auto* process = std::get_if<NoiseProcess>(&spec.source)) {
        validate(*process);
    } else if (!std::get<HistoryRule>(spec.source)) {
        throw InvalidInputError("SamplerSpec: history rule must be callable");
    }
}

}  // namespace detail

/// Kick angles theta_1..theta_n of one trajectory. Deterministic given
/// (seed, trajectory_index); trajectories carry independent substreams.
inline std::vector<double> sample_trajectory(const SamplerSpec& spec,
                                             std::int64_t trajectory_index) {
    detail::validate_spec(spec);
    if (trajectory_index < 0 || trajectory_index >= spec.trajectories) {
        throw InvalidInputError(
            "sample_trajectory: trajectory index out of range");
    }
    return detail::dispatch_steppers(
        spec, [&spec, trajectory_index](const auto& factory) {
            CounterRng rng(spec.seed,
                           static_cast<std::uint64_t>(trajectory_index));
            auto stepper = factory();
            std::vector<double> angles;
            angles.reserve(static_cast<std::size_t>(spec.steps));
            for (int k = 0; k < spec.steps; ++k) {
                angles.push_back(stepper.next(rng).angle);
            }
            return angles;
        });
}

/// Monte Carlo estimate of the coherence trace with per-component
/// standard errors. Bit-identical for identical specs at any thread
/// count (0 = hardware concurrency).
inline McEstimate mc_trace(const SamplerSpec& spec, unsigned threads = 0) {
    detail::validate_spec(spec);
    if (static_cast<double>(spec.steps) *
            static_cast<double>(spec.trajectories) >
        static_cast<double>(spec.max_kicks)) {
        throw ResourceLimitError(
            "mc_trace: steps * trajectories exceeds max_kicks");
    }
    CoherenceTrace trace = detail::dispatch_steppers(
        spec, [&spec, threads](const auto& factory) {
            return detail::run_trajectories(spec.steps, spec.trajectories,
                                            spec.seed, threads, factory);
        });
    return {std::move(trace), spec.trajectories};
}

}  // namespace dephasim
