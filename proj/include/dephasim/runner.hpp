#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "dephasim/analysis.hpp"
#include "dephasim/config.hpp"
#include "dephasim/csv.hpp"
#include "dephasim/exact.hpp"
#include "dephasim/monte_carlo.hpp"

namespace dephasim {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_runtime = 2;

namespace detail {

inline std::string format_fixed(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

inline std::string format_general(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

inline void print_fit(std::ostream& out, const DecayFit& fit) {
    out << "model=" << to_string(fit.model);
    if (fit.model == DecayModel::linear_exponent) {
        out << " gamma=" << format_fixed(fit.per_step_factor)
            << " lambda=" << format_fixed(fit.rate);
    } else {
        out << " lambda=" << format_fixed(fit.rate)
            << " gamma=" << format_fixed(fit.per_step_factor);
    }
    out << " phi=" << format_fixed(fit.phase_per_step)
        << " sse=" << format_general(fit.sse())
        << " points_used=" << fit.points_used << "\n";
}

inline json fit_to_json(const DecayFit& fit) {
    return json{{"model", to_string(fit.model)},
                {"lambda", fit.rate},
                {"gamma", fit.per_step_factor},
                {"phi", fit.phase_per_step},
                {"sse_linear", fit.sse_linear},
                {"sse_quadratic", fit.sse_quadratic},
                {"points_used", fit.points_used}};
}

}  // namespace detail

/// Executes a scenario config: runs the selected engine(s), writes the
/// trace CSV, and prints a one-screen summary. Returns a process exit
/// code: 0 success, 1 config/input problem, 2 compute/output failure.
inline int run_command(const std::string& config_path, unsigned threads,
                       std::ostream& out, std::ostream& err) {
    ScenarioConfig config;
    try {
        config = load_scenario_config(config_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        CoherenceTrace exact;
        if (config.engine != EngineKind::monte_carlo) {
            exact = exact_trace(config.process, config.initial_state,
                                config.steps)
                        .first;
        }
        McEstimate mc;
        if (config.engine != EngineKind::exact) {
            SamplerSpec spec;
            spec.source = config.process;
            spec.steps = config.steps;
            spec.trajectories = config.trajectories;
            spec.seed = config.seed;
            spec.max_kicks = config.max_kicks;
            mc = mc_trace(spec, threads);
        }

        const CoherenceTrace& written =
            config.engine == EngineKind::exact ? exact : mc.trace;
        write_trace_csv_file(config.output, written);

        out << "engine=" << to_string(config.engine)
            << " steps=" << config.steps;
        if (config.engine != EngineKind::exact) {
            out << " trajectories=" << config.trajectories
                << " seed=" << config.seed;
        }
        out << " output=" << config.output << "\n";
        const TraceStep& last = written.steps.back();
        out << "final step=" << last.step
            << " f_re=" << detail::format_general(last.factor.real())
            << " f_im=" << detail::format_general(last.factor.imag())
            << " f_abs=" << detail::format_general(std::abs(last.factor))
            << "\n";
        if (config.engine == EngineKind::both) {
            double max_dev = 0.0;
            double max_se_multiple = 0.0;
            for (std::size_t k = 1; k < exact.steps.size(); ++k) {
                const auto delta =
                    mc.trace.steps[k].factor - exact.steps[k].factor;
                max_dev = std::max(max_dev, std::abs(delta));
                const StepError& se = *mc.trace.steps[k].se;
                if (se.re > 0.0) {
                    max_se_multiple = std::max(
                        max_se_multiple, std::abs(delta.real()) / se.re);
                }
                if (se.im > 0.0) {
                    max_se_multiple = std::max(
                        max_se_multiple, std::abs(delta.imag()) / se.im);
                }
            }
            out << "comparison max_abs_dev="
                << detail::format_general(max_dev) << " max_se_multiple="
                << detail::format_general(max_se_multiple) << "\n";
        }
        return exit_ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

/// Reads a trace CSV and prints the fitted decay law, both as a
/// key=value line and as a single-line JSON document.
inline int fit_command(const std::string& csv_path, std::ostream& out,
                       std::ostream& err) {
    DecayFit fit;
    try {
        const CoherenceTrace trace = read_trace_csv_file(csv_path);
        fit = fit_decay(trace);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    detail::print_fit(out, fit);
    out << detail::fit_to_json(fit).dump() << "\n";
    return exit_ok;
}

/// Builds the two alternating-conditional kernels, mixes them with the
/// given weight, and prints the per-kernel and mixed decay factors with
/// the improvement verdict.
inline int parrondo_demo_command(double epsilon, double weight, int steps,
                                 std::ostream& out, std::ostream& err) {
    ParrondoReport report;
    try {
        ParrondoParams params;
        params.epsilon = epsilon;
        params.weight_a = weight;
        const auto [kernel_a, kernel_b] = parrondo_pair(params);
        report = parrondo_report(kernel_a, kernel_b, weight, 0.0, epsilon,
                                 steps);
    } catch (const InvalidInputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const InsufficientDataError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    out << "gamma_a=" << detail::format_fixed(report.gamma_a) << "\n";
    out << "gamma_b=" << detail::format_fixed(report.gamma_b) << "\n";
    out << "gamma_mixed=" << detail::format_fixed(report.gamma_mixed)
        << "\n";
    out << "improvement=" << detail::format_fixed(report.improvement)
        << "\n";
    out << "verdict=" << (report.verdict ? "true" : "false") << "\n";
    return exit_ok;
}

}  // namespace dephasim
