#include <gtest/gtest.h>
#include <gmock/gmock.h>

#include <numbers>

#include "asymfield/circuit.hpp"
#include "asymfield/templates.hpp"

using namespace asymfield;
using ::testing::Contains;
using ::testing::HasSubstr;

namespace {

Circuit two_segment_line() {
    Circuit c;
    c.elements.emplace_back(Segment{"a", 0.3, 1.0, LinkId("r1"), LinkId("r2"), LinkId("r3"), LinkId("r4")});
    c.elements.emplace_back(Segment{"b", 0.4, 1.0, LinkId("r2"), LinkId("r5"), LinkId("r6"), LinkId("r3")});
    c.ports = {{"L", LinkId("r1"), LinkId("r4")}, {"R", LinkId("r6"), LinkId("r5")}};
    c.probe = DipoleProbe{"a", 0.5};
    return c;
}

}  // namespace

TEST(Validate, TemplatesAreValid) {
    EXPECT_TRUE(validate(template_waveguide(1.0, 0.5)).empty());
    EXPECT_TRUE(validate(template_ring(0.98, 0.0, 0.25)).empty());
    EXPECT_TRUE(validate(template_ring_backscatter(0.98, 0.017, 0.0, 2.0, 0.3)).empty());
    EXPECT_TRUE(validate(template_sagnac_device(0.7, 0.98, 0.7, {0, 0, 0, 1, 2}, 0.125)).empty());
}

TEST(Validate, ChainedSegmentsAreValid) { EXPECT_TRUE(validate(two_segment_line()).empty()); }

TEST(Validate, LinkConsumedTwice) {
    auto c = two_segment_line();
    std::get<Segment>(c.elements[1]).bwd_in = LinkId("r2");
    EXPECT_THAT(validate(c), Contains("link r2 has 2 consumers"));
}

TEST(Validate, MissingProbe) {
    auto c = two_segment_line();
    c.probe.reset();
    const auto d = validate(c);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0], "no dipole probe");
}

TEST(Validate, ProbeOnUnknownSegment) {
    auto c = two_segment_line();
    c.probe->segment = "zz";
    EXPECT_THAT(validate(c), Contains("probe host segment zz not found"));
}

TEST(Validate, RangeChecks) {
    auto c = template_ring(0.5, 0.0, 0.5);
    std::get<Coupler>(c.elements[0]).sigma = 1.2;
    EXPECT_THAT(validate(c), Contains("sigma out of range for coupler c1"));

    auto b = template_ring_backscatter(0.5, 0.1, 0.0, 1.0, 0.5);
    std::get<Scatterer>(b.elements[2]).rho = -0.1;
    EXPECT_THAT(validate(b), Contains("rho out of range for scatterer sc1"));

    auto w = template_waveguide(0.0, 0.5);
    std::get<Segment>(w.elements[0]).atten = 0.0;
    EXPECT_THAT(validate(w), Contains("atten out of range for segment wg"));
    w.probe->offset = 1.5;
    EXPECT_THAT(validate(w), Contains("probe offset out of range"));
}

TEST(Validate, SigmaOneIsInRange) {
    // Decoupled rings are legal structures; the pole shows up in the solve.
    EXPECT_NO_THROW(template_ring(1.0, 0.0, 0.5));
}

TEST(Validate, DuplicateIdentifiersAndPorts) {
    auto c = two_segment_line();
    std::get<Segment>(c.elements[1]).id = "a";
    c.ports[1].label = "L";
    const auto d = validate(c);
    EXPECT_THAT(d, Contains("duplicate identifier a"));
    EXPECT_THAT(d, Contains("duplicate port label L"));
}

TEST(Validate, NoPorts) {
    auto c = template_ring(0.5, 0.0, 0.5);
    c.ports.clear();
    const auto d = validate(c);
    EXPECT_THAT(d, Contains("no external ports"));
    EXPECT_THAT(d, Contains("link A1 has no driver"));
    EXPECT_THAT(d, Contains("link B1 has no consumer"));
}

TEST(Validate, CouplerPairsMustBeDisjoint) {
    auto c = template_ring(0.5, 0.0, 0.5);
    std::get<Coupler>(c.elements[0]).bwd_in[0] = LinkId("A4");
    EXPECT_THAT(validate(c), Contains("coupler c1 forward and backward pairs share link A4"));
}

TEST(Validate, RequireValidJoinsDiagnostics) {
    auto c = two_segment_line();
    c.probe.reset();
    c.ports.clear();
    try {
        require_valid(c);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_THAT(e.what(), HasSubstr("no external ports; "));
        EXPECT_THAT(e.what(), HasSubstr("no dipole probe"));
    }
}

TEST(Templates, LinkCounts) {
    EXPECT_EQ(template_waveguide(0.0, 0.5).links().size(), 4u);
    EXPECT_EQ(template_ring(0.98, 0.0, 0.25).links().size(), 8u);
    EXPECT_EQ(template_ring_backscatter(0.98, 0.017, 0.0, 1.0, 0.0).links().size(), 12u);
    EXPECT_EQ(template_sagnac_device(0.7, 0.9, 0.7, {0, 0, 0, 0, 0}, 0.5).links().size(), 24u);
}

TEST(Templates, SagnacLinksAreTheTwelvePairs) {
    const auto links = template_sagnac_device(0.7, 0.9, 0.7, {0, 0, 0, 0, 0}, 0.5).links();
    for (int k = 1; k <= 12; ++k) {
        EXPECT_THAT(links, Contains(LinkId("A" + std::to_string(k))));
        EXPECT_THAT(links, Contains(LinkId("B" + std::to_string(k))));
    }
}

TEST(Templates, LosslessFlag) {
    EXPECT_TRUE(template_ring(0.9, 1.0, 0.5).lossless());
    EXPECT_FALSE(template_ring(0.9, 1.0, 0.5, 0.99).lossless());
}

TEST(ProbeSplit, PhasesAddUpToSegment) {
    const Segment s{"x", 3.0, 1.0, LinkId("a"), LinkId("b"), LinkId("c"), LinkId("d")};
    const auto p = probe_split(s, 0.25);
    EXPECT_DOUBLE_EQ(p.ccw_phase, 0.75);
    EXPECT_DOUBLE_EQ(p.cw_phase, 2.25);
}

TEST(Identifier, Rules) {
    EXPECT_TRUE(is_identifier("A12"));
    EXPECT_TRUE(is_identifier("_x"));
    EXPECT_FALSE(is_identifier("1a"));
    EXPECT_FALSE(is_identifier("a-b"));
    EXPECT_FALSE(is_identifier(""));
}
