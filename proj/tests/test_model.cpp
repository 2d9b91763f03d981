#include <gtest/gtest.h>
#include <gmock/gmock.h>

#include <cmath>
#include <numbers>

#include "asymfield/model.hpp"

using namespace asymfield;
using ::testing::HasSubstr;

namespace {
constexpr double pi = std::numbers::pi;

double max_diff(const FieldEnhancement& a, const FieldEnhancement& b) {
    double d = 0.0;
    for (const auto& p : a.ports) d = std::max(d, std::abs(p.value - b.at(p.port)));
    return d;
}

constexpr const char* kRing = R"(mode n=2 ng=2 aeff=9.9225e-14 lambda0=630e-9
dipole p=1e-29
coupler c1 sigma=0.98 fwd=A1,A2,A4,A3 bwd=B4,B3,B1,B2
segment ring phase=0 fwd=A3,A2 bwd=B2,B3
port L in=A1 out=B1
port R in=B4 out=A4
probe segment=ring offset=0.25
)";
}  // namespace

TEST(Model, Names) {
    EXPECT_EQ(topology_from_name("ring"), Topology::ring);
    EXPECT_EQ(topology_from_name("ring_backscatter"), Topology::backscatter);
    EXPECT_FALSE(topology_from_name("disk"));
    EXPECT_EQ(engine_from_name("analytic"), Engine::analytic);
}

TEST(Model, UnknownParameterRejected) {
    EXPECT_THROW(Model::from_template(Topology::ring, {{"rho", 0.1}}), ValidationError);
    const auto m = Model::from_template(Topology::ring);
    EXPECT_THROW(m.evaluate({{"bogus", 1.0}}, Engine::solver), ValidationError);
    EXPECT_TRUE(m.accepts("lambda0"));
    EXPECT_FALSE(m.accepts("delta_s"));
}

TEST(Model, RingDefaultsAreResonant) {
    const auto m = Model::from_template(Topology::ring);
    for (auto e : {Engine::analytic, Engine::solver}) EXPECT_NEAR(m.evaluate({}, e).rates.total_ratio(), 99.0, 1e-9);
}

TEST(Model, EnginesAgreeOnEveryTemplate) {
    for (auto t : {Topology::waveguide, Topology::ring, Topology::backscatter, Topology::sagnac}) {
        const auto m = Model::from_template(t);
        const auto a = m.evaluate({}, Engine::analytic);
        const auto s = m.evaluate({}, Engine::solver);
        EXPECT_LT(max_diff(a.enhancement, s.enhancement), 1e-9) << topology_name(t);
    }
}

TEST(Model, BackscatterMismatch) {
    const auto m = Model::from_template(Topology::backscatter, {{"rho", 0.017}});
    const auto b = m.resolve({{"Delta", pi / 2}});
    EXPECT_DOUBLE_EQ(b.at("s"), 0.25);
    EXPECT_THROW(m.resolve({{"Delta", 7.0}}), ValidationError);
    EXPECT_NEAR(m.evaluate({{"Delta", 0.0}}, Engine::solver).rates.total_ratio(), 57.96, 0.01);
}

TEST(Model, SagnacDerivedParameters) {
    const auto m = Model::from_template(Topology::sagnac);
    const auto b = m.resolve({{"delta_s", 1.0}, {"delta_m", 2 * pi}, {"delta_a", pi}, {"dtilde0", pi / 2}});
    EXPECT_DOUBLE_EQ(b.at("delta2"), 1.0);
    EXPECT_DOUBLE_EQ(b.at("delta5"), 2 * pi);
    EXPECT_DOUBLE_EQ(b.at("delta4"), pi);
    const auto p = Model::sagnac_params(b);
    EXPECT_NEAR(std::remainder(p.routing_phase() - pi / 2, 2 * pi), 0.0, 1e-12);
}

TEST(Model, SagnacDefaultsMatchResolvedCaption) {
    const auto b = Model::from_template(Topology::sagnac).resolve();
    EXPECT_DOUBLE_EQ(b.at("sigma_s"), std::numbers::sqrt2 / 2);
    EXPECT_DOUBLE_EQ(b.at("sigma_ms"), 0.98);
    EXPECT_DOUBLE_EQ(b.at("sigma_ma"), 0.7);
}

TEST(Model, AnalyticRejectsLoss) {
    const auto m = Model::from_template(Topology::ring, {{"atten", 0.99}});
    EXPECT_THROW(m.evaluate({}, Engine::analytic), ValidationError);
    EXPECT_LT(m.evaluate({}, Engine::solver).rates.total_ratio(), 99.0);
}

TEST(Model, SingularPropagates) {
    const auto m = Model::from_template(Topology::ring, {{"sigma", 1.0}});
    EXPECT_THROW(m.evaluate({}, Engine::solver), SingularError);
    try {
        m.evaluate({}, Engine::analytic);
        FAIL();
    } catch (const SingularError& e) {
        EXPECT_THAT(e.what(), HasSubstr("singular system: |1 - sigma e^{i delta}| below threshold"));
    }
}

TEST(Model, PhysicalParameters) {
    const auto m = Model::from_template(Topology::waveguide);
    const auto a = m.evaluate({}, Engine::solver);
    const auto b = m.evaluate({{"nocc", 1}}, Engine::solver);
    EXPECT_NEAR(b.rates.gamma_wg / a.rates.gamma_wg, 2.0, 1e-14);
    EXPECT_THROW(m.evaluate({{"nocc", 0.5}}, Engine::solver), ValidationError);
    EXPECT_THROW(m.evaluate({{"n", -1}}, Engine::solver), ValidationError);
}

TEST(Model, NetlistOverrides) {
    const auto m = Model::from_netlist(parse_netlist(kRing));
    EXPECT_TRUE(m.accepts("c1.sigma"));
    EXPECT_TRUE(m.accepts("ring.phase"));
    EXPECT_TRUE(m.accepts("probe.offset"));
    EXPECT_FALSE(m.accepts("c1.phase"));
    EXPECT_FALSE(m.accepts("sigma"));
    EXPECT_NEAR(m.evaluate({}, Engine::solver).rates.total_ratio(), 99.0, 1e-9);
    EXPECT_NEAR(m.evaluate({{"ring.phase", pi}}, Engine::solver).rates.total_ratio(), 0.0101010101, 1e-9);
    EXPECT_NEAR(m.evaluate({{"c1.sigma", 0.9}}, Engine::solver).rates.total_ratio(), 19.0, 1e-9);
    EXPECT_THROW(m.evaluate({}, Engine::analytic), ValidationError);
    EXPECT_EQ(m.port_labels(), (std::vector<std::string>{"L", "R"}));
}
