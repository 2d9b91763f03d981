#include <gtest/gtest.h>
#include <gmock/gmock.h>

#include <numbers>
#include <random>

#include "asymfield/netlist.hpp"
#include "asymfield/templates.hpp"

using namespace asymfield;
using ::testing::HasSubstr;

namespace {

constexpr const char* kRing = R"(# ring
mode n=2 ng=2 aeff=9.9225e-14 lambda0=630e-9
dipole p=1e-29
coupler c1 sigma=0.98 fwd=A1,A2,A4,A3 bwd=B4,B3,B1,B2
segment ring phase=2pi fwd=A3,A2 bwd=B2,B3
port L in=A1 out=B1
port R in=B4 out=A4
probe segment=ring offset=0.25
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
}

void expect_parse_error(const std::string& text, const std::string& message, std::size_t line) {
    try {
        parse_netlist(text);
        FAIL() << "expected ParseError: " << message;
    } catch (const ParseError& e) {
        EXPECT_THAT(e.what(), HasSubstr(message));
        EXPECT_EQ(e.line(), line);
    }
}

}  // namespace

TEST(Netlist, ParsesRing) {
    const auto nl = parse_netlist(kRing);
    EXPECT_EQ(nl.circuit.links().size(), 8u);
    EXPECT_EQ(nl.circuit.elements.size(), 2u);
    EXPECT_EQ(nl.circuit.ports.size(), 2u);
    EXPECT_DOUBLE_EQ(std::get<Segment>(nl.circuit.elements[1]).phase, 2.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(nl.circuit.probe->offset, 0.25);
    EXPECT_DOUBLE_EQ(nl.mode.lambda0, 630e-9);
    EXPECT_EQ(nl.circuit, template_ring(0.98, 2.0 * std::numbers::pi, 0.25));
}

TEST(Netlist, SigmaOutOfRange) {
    expect_parse_error(replace(kRing, "sigma=0.98", "sigma=1.2"), "sigma out of range", 4);
}

TEST(Netlist, ErrorColumns) {
    try {
        parse_netlist(replace(kRing, "sigma=0.98", "sigma=abc"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.column(), 18u);  // the value, not the key
    }
}

TEST(Netlist, Errors) {
    expect_parse_error(replace(kRing, "probe segment=ring offset=0.25", ""), "no dipole probe", 9);
    expect_parse_error(std::string(kRing) + "probe segment=ring offset=0.5\n", "multiple probes", 9);
    expect_parse_error(replace(kRing, "port R", "port L"), "duplicate identifier L", 7);
    expect_parse_error(replace(kRing, "segment ring", "segment c1"), "duplicate identifier c1", 5);
    expect_parse_error(replace(kRing, "sigma=0.98", "sigma=0.98 sigma=0.9"), "duplicate key", 4);
    expect_parse_error(replace(kRing, "sigma=0.98", "sigma=0.98 foo=1"), "unknown key 'foo'", 4);
    expect_parse_error(replace(kRing, " sigma=0.98", ""), "missing", 4);
    expect_parse_error(replace(kRing, "fwd=A1,A2,A4,A3", "fwd=A1,A2,A4"), "fwd", 4);
    expect_parse_error(replace(kRing, "coupler", "couplr"), "unknown statement 'couplr'", 4);
    expect_parse_error(replace(kRing, "dipole p=1e-29", ""), "missing dipole", 9);
    expect_parse_error(replace(kRing, "offset=0.25", "offset=2"), "offset out of range", 8);
}

TEST(Netlist, NetworkErrorsAreValidationErrors) {
    EXPECT_THROW(parse_netlist(replace(kRing, "port R in=B4 out=A4", "")), ValidationError);
}

TEST(Netlist, LengthTimesK0) {
    const auto nl = parse_netlist(replace(kRing, "phase=2pi", "length=2e-6 k0=1.5e6 atten=0.9"));
    const auto& seg = std::get<Segment>(nl.circuit.elements[1]);
    EXPECT_DOUBLE_EQ(seg.phase, 3.0);
    EXPECT_DOUBLE_EQ(seg.atten, 0.9);
    expect_parse_error(replace(kRing, "phase=2pi", "phase=1 length=2"), "either phase or length", 5);
}

TEST(Netlist, OptionalModeAndDipoleFields) {
    auto text = replace(kRing, "lambda0=630e-9", "lambda0=630e-9 length=93.7e-6");
    text = replace(text, "p=1e-29", "p=1e-29 nocc=2 align=0.5");
    const auto nl = parse_netlist(text);
    ASSERT_TRUE(nl.mode.length);
    EXPECT_DOUBLE_EQ(*nl.mode.length, 93.7e-6);
    EXPECT_EQ(nl.dipole.occupation, 2);
    EXPECT_DOUBLE_EQ(nl.dipole.alignment, 0.5);
}

TEST(Netlist, RoundTripRing) {
    const auto nl = parse_netlist(kRing);
    EXPECT_EQ(parse_netlist(serialize_netlist(nl)), nl);
}

TEST(Netlist, RoundTripSagnacTemplate) {
    Netlist nl;
    nl.circuit = template_sagnac_device(std::numbers::sqrt2 / 2, 0.98, 0.7,
                                        {0.1, 0.2, 0.3, 2 * std::numbers::pi, 2 * std::numbers::pi}, 0.125);
    EXPECT_EQ(parse_netlist(serialize_netlist(nl)), nl);
}

TEST(Netlist, RoundTripRandomTemplates) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        Netlist nl;
        nl.mode.length = u(rng) * 1e-4;
        nl.dipole.occupation = k % 3;
        switch (k % 4) {
            case 0: nl.circuit = template_waveguide(10 * u(rng), u(rng), 0.5 + 0.5 * u(rng)); break;
            case 1: nl.circuit = template_ring(u(rng), 7 * u(rng), u(rng), 0.5 + 0.5 * u(rng)); break;
            case 2: nl.circuit = template_ring_backscatter(u(rng), u(rng), u(rng), u(rng), u(rng)); break;
            default:
                nl.circuit = template_sagnac_device(u(rng), u(rng), u(rng), {u(rng), u(rng), u(rng), u(rng), u(rng)},
                                                    u(rng));
        }
        ASSERT_EQ(parse_netlist(serialize_netlist(nl)), nl) << serialize_netlist(nl);
    }
}

TEST(Angles, PiLiterals) {
    constexpr double pi = std::numbers::pi;
    EXPECT_DOUBLE_EQ(*parse_real("pi"), pi);
    EXPECT_DOUBLE_EQ(*parse_real("-pi/2"), -pi / 2);
    EXPECT_DOUBLE_EQ(*parse_real("3pi/4"), 3 * pi / 4);
    EXPECT_DOUBLE_EQ(*parse_real("2*pi"), 2 * pi);
    EXPECT_DOUBLE_EQ(*parse_real("0.25pi"), pi / 4);
    EXPECT_DOUBLE_EQ(*parse_real("1.5e-3"), 1.5e-3);
    EXPECT_FALSE(parse_real("p1"));
    EXPECT_FALSE(parse_real("pi/0"));
    EXPECT_FALSE(parse_real(""));
    EXPECT_FALSE(parse_real("1.5x"));
}
