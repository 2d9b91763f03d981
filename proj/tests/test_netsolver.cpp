#include <gtest/gtest.h>
#include <gmock/gmock.h>

#include <cmath>
#include <numbers>
#include <random>

#include "asymfield/netsolver.hpp"
#include "asymfield/selfcheck.hpp"
#include "asymfield/templates.hpp"

using namespace asymfield;
using ::testing::HasSubstr;

namespace {
constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};
}  // namespace

TEST(Lu, SolvesSmallSystem) {
    ComplexMatrix a(2);
    a(0, 0) = 2.0;
    a(0, 1) = I;
    a(1, 0) = -I;
    a(1, 1) = 3.0;
    const std::vector<cplx> b{1.0, 2.0};
    const auto x = LuFactorization(a).solve(b);
    const auto ax = a.multiply(x);
    EXPECT_LT(std::abs(ax[0] - b[0]), 1e-15);
    EXPECT_LT(std::abs(ax[1] - b[1]), 1e-15);
}

TEST(Lu, SingularMatrixThrows) {
    ComplexMatrix a(2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;
    EXPECT_THROW(LuFactorization{a}, SingularError);
}

TEST(Assemble, RingSystemShape) {
    const auto c = template_ring(0.98, 0.0, 0.25);
    const auto sys = assemble(c, "L");
    EXPECT_EQ(sys.size(), 8u);
    EXPECT_EQ(sys.rhs[sys.index_of(LinkId("A1"))], cplx(1.0));
    EXPECT_EQ(sys.rhs[sys.index_of(LinkId("B4"))], cplx(0.0));
    // Coupler row for A4, up to overall sign: A4 - sigma A1 - i kappa A2 = 0.
    const auto r = sys.index_of(LinkId("A4"));
    const cplx diag = sys.matrix(r, r);
    EXPECT_EQ(std::abs(diag), 1.0);
    EXPECT_NEAR(std::abs(sys.matrix(r, sys.index_of(LinkId("A1"))) / diag + 0.98), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sys.matrix(r, sys.index_of(LinkId("A2"))) / diag + I * std::sqrt(1 - 0.98 * 0.98)), 0.0,
                1e-15);
}

TEST(Assemble, BackscatterAndSagnacSizes) {
    EXPECT_EQ(assemble(template_ring_backscatter(0.98, 0.017, 0, 2 * pi, 0), "L").size(), 12u);
    EXPECT_EQ(assemble(template_sagnac_device(0.7, 0.98, 0.7, {0, 0, 0, 0, 0}, 0.5), "port1").size(), 24u);
}

TEST(Assemble, UnknownPort) { EXPECT_THROW(assemble(template_ring(0.5, 0, 0), "Q"), ValidationError); }

TEST(Solve, RingOnResonance) {
    const auto sol = solve(assemble(template_ring(0.98, 0.0, 0.25), "L"));
    const cplx a3 = sol.amplitude(LinkId("A3"));
    EXPECT_NEAR(a3.real(), 0.0, 1e-12);
    EXPECT_NEAR(a3.imag(), 9.9498743710662, 1e-9);
    EXPECT_LT(sol.relative_residual, 1e-14);
}

TEST(Solve, RingAntiResonance) {
    const auto sol = solve(assemble(template_ring(0.98, pi, 0.25), "L"));
    EXPECT_NEAR(std::abs(sol.amplitude(LinkId("A3"))), 0.100503781525921, 1e-12);
}

TEST(Solve, WaveguideThrough) {
    const auto sol = solve(assemble(template_waveguide(0.7, 0.5), "L"));
    const cplx t = sol.amplitude(LinkId("A2"));
    EXPECT_NEAR(std::abs(t), 1.0, 1e-15);
    EXPECT_NEAR(std::arg(t), 0.7, 1e-15);
}

TEST(Solve, DecoupledResonantRingIsSingular) {
    try {
        solve_network(template_ring(1.0, 0.0, 0.5));
        FAIL();
    } catch (const SingularError& e) {
        EXPECT_THAT(e.what(), HasSubstr("singular system:"));
    }
}

TEST(Solve, DecoupledRingOffResonanceIsFine) {
    const auto r = solve_network(template_ring(1.0, 1.0, 0.5));
    EXPECT_LT(std::abs(r.enhancement.at("L")), 1e-15);
}

TEST(Solve, Linearity) {
    const auto c = template_ring_backscatter(0.9, 0.2, 0.4, 1.3, 0.6);
    const std::vector<cplx> a{1.0, 0.0}, b{0.0, 1.0}, ab{cplx(0.3, 0.4), cplx(-1.2, 0.1)};
    const auto xa = solve(assemble(c, a)).amplitudes;
    const auto xb = solve(assemble(c, b)).amplitudes;
    const auto xab = solve(assemble(c, ab)).amplitudes;
    for (std::size_t i = 0; i < xa.size(); ++i) EXPECT_LT(std::abs(xab[i] - (ab[0] * xa[i] + ab[1] * xb[i])), 1e-12);
}

TEST(Solve, Deterministic) {
    const auto c = template_sagnac_device(0.6, 0.9, 0.5, {0.1, 0.2, 0.3, 0.4, 0.5}, 0.3);
    const auto a = solve_network(c).enhancement;
    const auto b = solve_network(c).enhancement;
    EXPECT_EQ(a.at("port1"), b.at("port1"));
    EXPECT_EQ(a.at("port2"), b.at("port2"));
}

TEST(Enhancement, RingResonance) {
    const auto f = solve_network(template_ring(0.98, 0.0, 0.25)).enhancement;
    EXPECT_NEAR(std::norm(f.at("L")), 99.0, 1e-9);
    EXPECT_NEAR(std::norm(f.at("R")), 99.0, 1e-9);
}

TEST(Enhancement, BackscatterResonance) {
    const auto f = solve_network(template_ring_backscatter(0.98, 0.017, 0.0, 2 * pi, 0.0)).enhancement;
    EXPECT_NEAR(f.intensity_sum() / 2, 57.96, 0.01);
}

TEST(Enhancement, WaveguidePlaneWaves) {
    const double d = 1.1;
    const auto f = solve_network(template_waveguide(d, 0.3)).enhancement;
    EXPECT_LT(std::abs(f.at("L") - std::polar(1.0, 0.3 * d)), 1e-15);
    EXPECT_LT(std::abs(f.at("R") - std::polar(1.0, 0.7 * d)), 1e-15);
}

TEST(Enhancement, PeriodicInRoundTripPhase) {
    const auto a = solve_network(template_ring(0.9, 0.7, 0.0)).enhancement;
    const auto b = solve_network(template_ring(0.9, 0.7 + 2 * pi, 0.0)).enhancement;
    EXPECT_LT(std::abs(a.at("L") - b.at("L")), 1e-12);
}

TEST(SMatrix, AllPassRing) {
    for (double d : {0.0, 0.5, 1.0, pi, 5.0}) {
        const auto s = scattering_matrix(template_ring(0.9, d, 0.5));
        EXPECT_NEAR(std::abs(s(1, 0)), 1.0, 1e-12);  // L -> R transmission
        EXPECT_NEAR(std::abs(s(0, 0)), 0.0, 1e-12);
    }
}

TEST(SMatrix, BackscatterTwoPortUnitary) {
    const auto s = scattering_matrix(template_ring_backscatter(0.95, 0.3, 0.2, 1.4, 0.5));
    EXPECT_NEAR(std::norm(s(0, 0)) + std::norm(s(1, 0)), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(s(0, 1) - s(1, 0)), 0.0, 1e-9);
}

TEST(SMatrix, RandomCircuitsUnitaryAndSymmetric) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        const auto s = scattering_matrix(detail::random_circuit(rng));
        EXPECT_LT(detail::unitarity_error(s), 1e-9);
        EXPECT_LT(detail::reciprocity_error(s), 1e-9);
    }
}

TEST(SMatrix, AttenuationLosesPower) {
    const auto s = scattering_matrix(template_ring(0.9, 0.0, 0.5, 0.95));
    EXPECT_LT(detail::column_norm(s, 0), 1.0 - 1e-6);
    EXPECT_LT(detail::column_norm(s, 1), 1.0 - 1e-6);
}

TEST(FaultInjection, FlippedSignBreaksReciprocity) {
    AssemblyOptions flip;
    flip.flip_backward_coupler_sign = true;
    std::mt19937_64 rng(5);
    int broken = 0;
    for (int k = 0; k < 50; ++k) {
        broken += detail::reciprocity_error(scattering_matrix(detail::random_circuit(rng), flip)) > 1e-3;
    }
    EXPECT_GT(broken, 10);
}
