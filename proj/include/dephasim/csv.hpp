#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dephasim/errors.hpp"
#include "dephasim/trace.hpp"

namespace dephasim {

inline constexpr const char* trace_csv_header =
    "step,f_re,f_im,f_abs,stderr_re,stderr_im";

namespace detail {

/// Full round-trip precision so repeated runs can be compared byte for
/// byte.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace detail

inline void write_trace_csv(std::ostream& out, const CoherenceTrace& trace) {
    out << trace_csv_header << '\n';
    for (const auto& step : trace.steps) {
        out << step.step << ',' << detail::format_double(step.factor.real())
            << ',' << detail::format_double(step.factor.imag()) << ','
            << detail::format_double(std::abs(step.factor)) << ',';
        if (step.se) {
            out << detail::format_double(step.se->re) << ','
                << detail::format_double(step.se->im);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

inline void write_trace_csv_file(const std::string& path,
                                 const CoherenceTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open output file: " + path);
    }
    write_trace_csv(out, trace);
    out.flush();
    if (!out) {
        throw IoError("failed writing output file: " + path);
    }
}

inline CoherenceTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("trace CSV: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != trace_csv_header) {
        throw IoError("trace CSV: unexpected header on line 1");
    }
    CoherenceTrace trace;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (fields.size() != 6) {
            throw IoError("trace CSV: wrong field count on line " +
                          std::to_string(line_number));
        }
        auto parse = [&line_number](const std::string& text,
                                    const char* name) {
            try {
                std::size_t used = 0;
                const double value = std::stod(text, &used);
                if (used != text.size()) {
                    throw std::invalid_argument(name);
                }
                return value;
            } catch (const std::exception&) {
                throw IoError(std::string("trace CSV: bad ") + name +
                              " on line " + std::to_string(line_number));
            }
        };
        TraceStep step;
        step.step = static_cast<int>(parse(fields[0], "step"));
        const double re = parse(fields[1], "f_re");
        const double im = parse(fields[2], "f_im");
        parse(fields[3], "f_abs");
        step.factor = {re, im};
        const bool has_re = !fields[4].empty();
        const bool has_im = !fields[5].empty();
        if (has_re != has_im) {
            throw IoError("trace CSV: partial stderr pair on line " +
                          std::to_string(line_number));
        }
        if (has_re) {
            step.se = StepError{parse(fields[4], "stderr_re"),
                                parse(fields[5], "stderr_im")};
        }
        trace.steps.push_back(step);
    }
    if (trace.steps.empty()) {
        throw IoError("trace CSV: no data rows");
    }
    return trace;
}

inline CoherenceTrace read_trace_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trace CSV: " + path);
    }
    return read_trace_csv(in);
}

}  // namespace dephasim
