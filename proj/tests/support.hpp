#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dephasim/distribution.hpp"
#include "dephasim/kernel.hpp"

namespace testsupport {

/// 24 well-separated angles straddling neither 0 nor the ±pi seam.
inline std::vector<double> angle_grid() {
    std::vector<double> grid;
    grid.reserve(24);
    for (int j = 0; j < 24; ++j) {
        grid.push_back(-std::numbers::pi +
                       (j + 0.5) * (2.0 * std::numbers::pi / 24.0));
    }
    return grid;
}

inline dephasim::DiscreteDistribution random_emission(std::mt19937_64& rng,
                                                      int max_atoms) {
    std::uniform_int_distribution<int> atom_count(1, max_atoms);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    std::vector<double> pool = angle_grid();
    const int count = atom_count(rng);
    std::vector<dephasim::KickAtom> atoms;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < count; ++i) {
        atoms.push_back({pool[static_cast<std::size_t>(i)], weight(rng)});
    }
    double total = 0.0;
    for (const auto& atom : atoms) total += atom.weight;
    for (auto& atom : atoms) atom.weight /= total;
    return dephasim::DiscreteDistribution(atoms);
}

/// Random conditional kernel: up to `max_branches` branches with 1-2
/// condition angles each (disjoint across branches), up to `max_atoms`
/// atoms per emission, plus a default emission.
inline dephasim::MarkovKickKernel random_kernel(std::mt19937_64& rng,
                                                int max_branches = 3,
                                                int max_atoms = 4) {
    std::uniform_int_distribution<int> branch_count(0, max_branches);
    std::uniform_int_distribution<int> condition_count(1, 2);
    const int branches = branch_count(rng);

    std::vector<double> pool = angle_grid();
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t next_condition = 0;

    std::vector<dephasim::KernelBranch> kernel_branches;
    for (int b = 0; b < branches; ++b) {
        const int conditions = condition_count(rng);
        std::vector<double> condition_angles;
        for (int c = 0; c < conditions; ++c) {
            condition_angles.push_back(pool[next_condition++]);
        }
        kernel_branches.push_back(
            {condition_angles, random_emission(rng, max_atoms)});
    }
    return dephasim::MarkovKickKernel(kernel_branches,
                                      random_emission(rng, max_atoms));
}

/// E[e^{i theta}] for theta ~ N(0, 2 lambda) by composite Simpson
/// quadrature; independent of any closed form under test.
inline std::complex<double> gaussian_characteristic_quadrature(
    double lambda) {
    const double sigma = std::sqrt(2.0 * lambda);
    const double half_width = 10.0 * sigma + 1.0;
    const int intervals = 200000;  // even
    const double h = 2.0 * half_width / intervals;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    auto integrand = [&](double x) {
        return norm * std::exp(-x * x / (2.0 * sigma * sigma)) *
               std::complex<double>(std::cos(x), std::sin(x));
    };
    std::complex<double> sum = integrand(-half_width) +
                               integrand(half_width);
    for (int i = 1; i < intervals; ++i) {
        const double x = -half_width + i * h;
        sum += integrand(x) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * (h / 3.0);
}

inline std::string temp_path(const std::string& stem) {
    static std::mt19937_64 rng(std::random_device{}());
    std::ostringstream path;
    path << "/tmp/dephasim_test_" << stem << "_" << rng() << ".tmp";
    return path.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

/// Runs the CLI binary, captures stdout+stderr, returns the exit code.
struct CliResult {
    int exit_code = -1;
    std::string output;
};

inline CliResult run_cli(const std::string& args) {
    const std::string out_path = temp_path("cli_out");
    const std::string command = std::string(DEPHASIM_CLI_EXE) + " " + args +
                                " > " + out_path + " 2>&1";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WEXITSTATUS(status);
    result.output = read_file(out_path);
    std::remove(out_path.c_str());
    return result;
}

}  // namespace testsupport
