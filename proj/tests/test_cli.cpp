#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dephasim/analysis.hpp"
#include "dephasim/csv.hpp"
#include "support.hpp"

using Catch::Matchers::ContainsSubstring;
using testsupport::run_cli;
using testsupport::temp_path;
using testsupport::write_file;

namespace {

std::string gaussian_config(const std::string& output, int steps,
                            const std::string& engine,
                            const std::string& extra = "") {
    return "{\n"
           "  \"schema_version\": 1,\n"
           "  \"process\": {\"kind\": \"iid_gaussian\", \"lambda\": 0.02},\n"
           "  \"initial_state\": {\"a\": 0.5, \"b_re\": 0.5, \"b_im\": 0.0},\n"
           "  \"steps\": " +
           std::to_string(steps) +
           ",\n"
           "  \"engine\": \"" +
           engine + "\",\n  \"output\": \"" + output + "\"" + extra +
           "\n}\n";
}

std::vector<std::string> csv_row(const std::string& content,
                                 std::size_t row) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        lines.push_back(content.substr(start, end - start));
        start = end + 1;
    }
    REQUIRE(row < lines.size());
    std::vector<std::string> fields;
    const std::string& line = lines[row];
    start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

TEST_CASE("run command, exact engine") {
    const std::string csv = temp_path("run_exact");
    const std::string config = temp_path("run_exact_cfg");
    write_file(config, gaussian_config(csv, 50, "exact"));

    const auto result = run_cli("run " + config);
    INFO(result.output);
    REQUIRE(result.exit_code == 0);

    const std::string content = testsupport::read_file(csv);
    const auto header = csv_row(content, 0);
    CHECK(header.size() == 6);
    CHECK(header[0] == "step");

    const auto row50 = csv_row(content, 51);
    REQUIRE(row50.size() == 6);
    CHECK(row50[0] == "50");
    CHECK_THAT(std::stod(row50[3]),
               Catch::Matchers::WithinAbs(std::exp(-1.0), 1e-12));
    CHECK(row50[4].empty());
    CHECK(row50[5].empty());
    std::remove(csv.c_str());
    std::remove(config.c_str());
}

TEST_CASE("run command, zero steps") {
    const std::string csv = temp_path("run_zero");
    const std::string config = temp_path("run_zero_cfg");
    write_file(config, gaussian_config(csv, 0, "exact"));
    const auto result = run_cli("run " + config);
    REQUIRE(result.exit_code == 0);
    const std::string content = testsupport::read_file(csv);
    CHECK(content ==
          "step,f_re,f_im,f_abs,stderr_re,stderr_im\n0,1,0,1,,\n");
    std::remove(csv.c_str());
    std::remove(config.c_str());
}

TEST_CASE("run command is byte-deterministic across runs and threads") {
    const std::string csv_a = temp_path("det_a");
    const std::string csv_b = temp_path("det_b");
    const std::string config_a = temp_path("det_a_cfg");
    const std::string config_b = temp_path("det_b_cfg");
    const std::string extra =
        ",\n  \"trajectories\": 30000,\n  \"seed\": 12345";
    write_file(config_a, gaussian_config(csv_a, 20, "monte_carlo", extra));
    write_file(config_b, gaussian_config(csv_b, 20, "monte_carlo", extra));

    REQUIRE(run_cli("run " + config_a + " --threads 1").exit_code == 0);
    REQUIRE(run_cli("run " + config_b + " --threads 4").exit_code == 0);
    const std::string bytes_a = testsupport::read_file(csv_a);
    const std::string bytes_b = testsupport::read_file(csv_b);
    CHECK(bytes_a == bytes_b);
    CHECK_FALSE(csv_row(bytes_a, 1).at(4).empty());
    for (const auto& path : {csv_a, csv_b, config_a, config_b}) {
        std::remove(path.c_str());
    }
}

TEST_CASE("run command with both engines reports the comparison") {
    const std::string csv = temp_path("run_both");
    const std::string config = temp_path("run_both_cfg");
    write_file(config,
               gaussian_config(csv, 10, "both",
                               ",\n  \"trajectories\": 20000,\n"
                               "  \"seed\": 9"));
    const auto result = run_cli("run " + config);
    INFO(result.output);
    REQUIRE(result.exit_code == 0);
    CHECK_THAT(result.output, ContainsSubstring("max_se_multiple="));
    const std::string content = testsupport::read_file(csv);
    CHECK_FALSE(csv_row(content, 1).at(4).empty());
    std::remove(csv.c_str());
    std::remove(config.c_str());
}

TEST_CASE("fit command classifies synthetic traces") {
    SECTION("geometric decay") {
        dephasim::CoherenceTrace trace;
        for (int k = 0; k <= 25; ++k) {
            trace.steps.push_back(
                {k, {std::pow(0.9, k), 0.0}, std::nullopt});
        }
        const std::string csv = temp_path("fit_linear");
        dephasim::write_trace_csv_file(csv, trace);
        const auto result = run_cli("fit " + csv);
        REQUIRE(result.exit_code == 0);
        CHECK_THAT(result.output,
                   ContainsSubstring("model=linear gamma=0.900000"));
        CHECK_THAT(result.output, ContainsSubstring("points_used=25"));
        std::remove(csv.c_str());
    }
    SECTION("quadratic decay") {
        dephasim::CoherenceTrace trace;
        for (int k = 0; k <= 25; ++k) {
            trace.steps.push_back(
                {k, {std::exp(-0.01 * k * k), 0.0}, std::nullopt});
        }
        const std::string csv = temp_path("fit_quadratic");
        dephasim::write_trace_csv_file(csv, trace);
        const auto result = run_cli("fit " + csv);
        REQUIRE(result.exit_code == 0);
        CHECK_THAT(result.output,
                   ContainsSubstring("model=quadratic lambda=0.010000"));
        std::remove(csv.c_str());
    }
    SECTION("malformed csv exits 1") {
        const std::string csv = temp_path("fit_bad");
        write_file(csv, "step,nope\n1,2\n");
        CHECK(run_cli("fit " + csv).exit_code == 1);
        std::remove(csv.c_str());
    }
    SECTION("missing file exits 1") {
        CHECK(run_cli("fit /tmp/definitely_not_here_12345.csv").exit_code ==
              1);
    }
}

TEST_CASE("run then fit recovers the per-step factor") {
    const std::string csv = temp_path("roundtrip");
    const std::string config = temp_path("roundtrip_cfg");
    write_file(
        config,
        "{\n"
        "  \"schema_version\": 1,\n"
        "  \"process\": {\"kind\": \"iid_discrete\", \"atoms\": ["
        "{\"angle\": 0.0, \"weight\": 0.3333333333333333},"
        "{\"angle\": -1.5707963267948966, \"weight\": 0.3333333333333333},"
        "{\"angle\": 1.5707963267948966, \"weight\": 0.3333333333333334}"
        "]},\n"
        "  \"initial_state\": {\"a\": 0.5, \"b_re\": 0.5, \"b_im\": 0.0},\n"
        "  \"steps\": 20,\n"
        "  \"engine\": \"exact\",\n"
        "  \"output\": \"" +
            csv + "\"\n}\n");
    REQUIRE(run_cli("run " + config).exit_code == 0);
    const auto result = run_cli("fit " + csv);
    REQUIRE(result.exit_code == 0);
    CHECK_THAT(result.output,
               ContainsSubstring("model=linear gamma=0.333333"));
    const dephasim::CoherenceTrace trace =
        dephasim::read_trace_csv_file(csv);
    const dephasim::DecayFit fit = dephasim::fit_decay(trace);
    CHECK_THAT(fit.per_step_factor * 3.0,
               Catch::Matchers::WithinAbs(1.0, 1e-9));
    std::remove(csv.c_str());
    std::remove(config.c_str());
}

TEST_CASE("parrondo-demo command") {
    SECTION("the default mixture beats both baths") {
        const auto result = run_cli("parrondo-demo");
        REQUIRE(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("gamma_mixed=0.666"));
        CHECK_THAT(result.output, ContainsSubstring("verdict=true"));
    }
    SECTION("a weight-one mixture shows no improvement") {
        const auto result = run_cli("parrondo-demo --weight 1.0");
        REQUIRE(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("verdict=false"));
    }
    SECTION("too few steps to fit exits 1") {
        const auto result =
            run_cli("parrondo-demo --epsilon 0.3 --steps 1");
        CHECK(result.exit_code == 1);
        CHECK_THAT(result.output, ContainsSubstring("error"));
    }
    SECTION("epsilon below the tolerance threshold exits 1") {
        CHECK(run_cli("parrondo-demo --epsilon 1e-9").exit_code == 1);
    }
}

TEST_CASE("cli error handling") {
    SECTION("missing config file exits 1") {
        const auto result = run_cli("run /tmp/no_such_config_98765.json");
        CHECK(result.exit_code == 1);
    }
    SECTION("missing required fields are named on stderr") {
        const std::string config = temp_path("missing_field_cfg");
        write_file(config,
                   R"({"schema_version": 1,
                       "process": {"kind": "iid_gaussian", "lambda": 0.1},
                       "initial_state": {"a": 0.5, "b_re": 0.5, "b_im": 0},
                       "steps": 5, "engine": "exact"})");
        const auto result = run_cli("run " + config);
        CHECK(result.exit_code == 1);
        CHECK_THAT(result.output, ContainsSubstring("output"));
        std::remove(config.c_str());
    }
    SECTION("a kick budget violation exits 2") {
        const std::string csv = temp_path("budget");
        const std::string config = temp_path("budget_cfg");
        write_file(config, gaussian_config(
                               csv, 1000, "monte_carlo",
                               ",\n  \"trajectories\": 10000000,\n"
                               "  \"seed\": 1,\n  \"max_kicks\": 1000000"));
        const auto result = run_cli("run " + config);
        CHECK(result.exit_code == 2);
        std::remove(config.c_str());
    }
    SECTION("unknown subcommands and empty invocations exit 1") {
        CHECK(run_cli("frobnicate").exit_code == 1);
        CHECK(run_cli("").exit_code == 1);
    }
    SECTION("help exits 0") {
        CHECK(run_cli("--help").exit_code == 0);
    }
}
