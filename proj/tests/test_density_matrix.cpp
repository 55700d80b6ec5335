#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dephasim/density_matrix.hpp"
#include "dephasim/errors.hpp"

using namespace dephasim;
using std::numbers::pi;

namespace {
const DensityMatrix superposition{0.5, {0.5, 0.0}};
}

TEST_CASE("phase rotation multiplies the coherence by exp(-i theta)") {
    SECTION("zero angle leaves the state unchanged") {
        const DensityMatrix out = apply_phase_rotation(superposition, 0.0);
        CHECK(out.a() == 0.5);
        CHECK(out.b() == std::complex<double>{0.5, 0.0});
    }
    SECTION("pi flips the coherence sign") {
        const DensityMatrix out = apply_phase_rotation(superposition, pi);
        CHECK_THAT(out.b().real(),
                   Catch::Matchers::WithinAbs(-0.5, 1e-15));
        CHECK_THAT(out.b().imag(), Catch::Matchers::WithinAbs(0.0, 1e-15));
    }
    SECTION("pi/2 maps b to -0.5i") {
        const DensityMatrix out =
            apply_phase_rotation(superposition, pi / 2.0);
        CHECK_THAT(out.b().real(), Catch::Matchers::WithinAbs(0.0, 1e-15));
        CHECK_THAT(out.b().imag(),
                   Catch::Matchers::WithinAbs(-0.5, 1e-15));
    }
    SECTION("populations and coherence magnitude are preserved") {
        const DensityMatrix out = apply_phase_rotation(superposition, 1.7);
        CHECK(out.a() == superposition.a());
        CHECK_THAT(coherence_magnitude(out),
                   Catch::Matchers::WithinAbs(0.5, 1e-15));
    }
    SECTION("non-finite angle is rejected") {
        CHECK_THROWS_AS(apply_phase_rotation(
                            superposition,
                            std::numeric_limits<double>::quiet_NaN()),
                        InvalidInputError);
        CHECK_THROWS_AS(apply_phase_rotation(
                            superposition,
                            std::numeric_limits<double>::infinity()),
                        InvalidInputError);
    }
}

TEST_CASE("composed rotations equal one net rotation") {
    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    std::uniform_int_distribution<int> length(1, 100);
    for (int trial = 0; trial < 25; ++trial) {
        DensityMatrix state = superposition;
        double net = 0.0;
        const int n = length(rng);
        for (int i = 0; i < n; ++i) {
            const double theta = angle(rng);
            state = apply_phase_rotation(state, theta);
            net += theta;
        }
        const DensityMatrix direct =
            apply_phase_rotation(superposition, net);
        CHECK_THAT(std::abs(state.b() - direct.b()),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("dephase scales the coherence") {
    SECTION("identity factor") {
        CHECK(dephase(superposition, {1.0, 0.0}).b() ==
              std::complex<double>{0.5, 0.0});
    }
    SECTION("one third") {
        CHECK_THAT(dephase(superposition, {1.0 / 3.0, 0.0}).b().real(),
                   Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-15));
    }
    SECTION("complete dephasing") {
        CHECK(dephase(superposition, {0.0, 0.0}).b() ==
              std::complex<double>{0.0, 0.0});
    }
    SECTION("an expanding factor is a contract violation") {
        CHECK_THROWS_AS(dephase(superposition, {1.0 + 1e-6, 0.0}),
                        InvalidInputError);
    }
}

TEST_CASE("dephase preserves validity for any contraction factor") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = unit(rng);
        const double max_b = std::sqrt(a * (1.0 - a));
        const std::complex<double> b =
            std::polar(unit(rng) * max_b, angle(rng));
        const DensityMatrix state{a, b};
        const std::complex<double> factor =
            std::polar(unit(rng), angle(rng));
        const DensityMatrix out = dephase(state, factor);
        CHECK(out.a() * out.d() - std::norm(out.b()) >= -1e-12);
        CHECK_NOTHROW(DensityMatrix(out.a(), out.b()));
    }
}

TEST_CASE("diagnostics") {
    SECTION("pure ground state has purity 1") {
        CHECK(purity(DensityMatrix{1.0, {0.0, 0.0}}) == 1.0);
    }
    SECTION("maximally mixed state has purity one half") {
        CHECK(purity(DensityMatrix{0.5, {0.0, 0.0}}) == 0.5);
    }
    SECTION("pure superposition") {
        CHECK(coherence_magnitude(superposition) == 0.5);
        CHECK_THAT(purity(superposition),
                   Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    SECTION("rotation preserves purity exactly") {
        const DensityMatrix rotated =
            apply_phase_rotation(superposition, 2.31);
        CHECK(purity(rotated) == purity(superposition));
    }
}

TEST_CASE("construction validates the state") {
    SECTION("trace is renormalized within tolerance") {
        const DensityMatrix state{0.5, {0.1, 0.0}, 0.5 + 5e-13};
        CHECK_THAT(state.a() + state.d(),
                   Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    SECTION("trace violation beyond tolerance is rejected") {
        CHECK_THROWS_AS(DensityMatrix(0.5, {0.1, 0.0}, 0.6),
                        InvalidInputError);
    }
    SECTION("population outside [0, 1] is rejected") {
        CHECK_THROWS_AS(DensityMatrix(1.2, {0.0, 0.0}),
                        InvalidInputError);
        CHECK_THROWS_AS(DensityMatrix(-0.1, {0.0, 0.0}),
                        InvalidInputError);
    }
    SECTION("positivity violation is rejected") {
        CHECK_THROWS_AS(DensityMatrix(0.9, {0.5, 0.0}),
                        InvalidInputError);
    }
    SECTION("non-finite entries are rejected") {
        CHECK_THROWS_AS(
            DensityMatrix(std::numeric_limits<double>::quiet_NaN(),
                          {0.0, 0.0}),
            InvalidInputError);
    }
}
