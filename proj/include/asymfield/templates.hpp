#pragma once

// Reference topologies. Link names follow the usual A (counter-clockwise /
// left-to-right) and B (clockwise / right-to-left) amplitude labelling.

#include <array>
#include <cmath>
#include <string>

#include "asymfield/circuit.hpp"

namespace asymfield {

namespace detail {
inline LinkId L(const char* name) { return LinkId(name); }

inline Coupler make_coupler(const char* id, double sigma, std::array<const char*, 4> fwd,
                            std::array<const char*, 4> bwd) {
    return Coupler{id, sigma, {L(fwd[0]), L(fwd[1])}, {L(fwd[2]), L(fwd[3])}, {L(bwd[0]), L(bwd[1])},
                   {L(bwd[2]), L(bwd[3])}};
}

inline Segment make_segment(const char* id, double phase, std::array<const char*, 2> fwd,
                            std::array<const char*, 2> bwd, double atten = 1.0) {
    return Segment{id, phase, atten, L(fwd[0]), L(fwd[1]), L(bwd[0]), L(bwd[1])};
}

inline Circuit checked(Circuit c) {
    require_valid(c);
    return c;
}
}  // namespace detail

/// Straight waveguide with the dipole at fraction `offset` from the left end.
/// Ports: L (in A1, out B1), R (in B2, out A2).
inline Circuit template_waveguide(double phase, double offset, double atten = 1.0) {
    Circuit c;
    c.elements.emplace_back(detail::make_segment("wg", phase, {"A1", "A2"}, {"B2", "B1"}, atten));
    c.ports = {{"L", detail::L("A1"), detail::L("B1")}, {"R", detail::L("B2"), detail::L("A2")}};
    c.probe = DipoleProbe{"wg", offset};
    return detail::checked(std::move(c));
}

/// All-pass ring: one coupler and the ring arc (8 links). The bus waveguide is
/// the coupler's through path. The probe sits on the ring arc at
/// dipole phase offset * delta0 counter-clockwise from the coupler.
inline Circuit template_ring(double sigma, double delta0, double offset, double atten = 1.0) {
    Circuit c;
    c.elements.emplace_back(detail::make_coupler("c1", sigma, {"A1", "A2", "A4", "A3"}, {"B4", "B3", "B1", "B2"}));
    c.elements.emplace_back(detail::make_segment("ring", delta0, {"A3", "A2"}, {"B2", "B3"}, atten));
    c.ports = {{"L", detail::L("A1"), detail::L("B1")}, {"R", detail::L("B4"), detail::L("A4")}};
    c.probe = DipoleProbe{"ring", offset};
    return detail::checked(std::move(c));
}

/// Ring with a lumped scatterer after arc 1. The probe sits on arc 2, so the
/// dipole-scatterer mismatch is Delta = offset * delta2.
inline Circuit template_ring_backscatter(double sigma, double rho, double delta1, double delta2, double offset) {
    Circuit c;
    c.elements.emplace_back(detail::make_coupler("c1", sigma, {"A1", "A2", "A4", "A3"}, {"B4", "B3", "B1", "B2"}));
    c.elements.emplace_back(detail::make_segment("arc1", delta1, {"A3", "Ab1"}, {"Bb1", "B3"}));
    c.elements.emplace_back(Scatterer{"sc1", rho, detail::L("Ab1"), detail::L("Ab2"), detail::L("Bb2"),
                                      detail::L("Bb1")});
    c.elements.emplace_back(detail::make_segment("arc2", delta2, {"Ab2", "A2"}, {"B2", "Bb2"}));
    c.ports = {{"L", detail::L("A1"), detail::L("B1")}, {"R", detail::L("B4"), detail::L("A4")}};
    c.probe = DipoleProbe{"arc2", offset};
    return detail::checked(std::move(c));
}

/// Sagnac interferometer (splitter s), main ring (coupler ms) and auxiliary
/// ring (coupler ma): 3 couplers, 5 arcs, 24 links A1..A12, B1..B12. Ports
/// port1 and port2 enter at A1 / A2 and leave at B1 / B2. The probe sits on
/// arc 5 of the main ring; its phase from the Sagnac coupler is
/// delta3 + offset * delta5.
inline Circuit template_sagnac_device(double sigma_s, double sigma_ms, double sigma_ma,
                                      const std::array<double, 5>& delta, double offset) {
    Circuit c;
    c.elements.emplace_back(detail::make_coupler("s", sigma_s, {"A1", "A2", "A4", "A3"}, {"B4", "B3", "B1", "B2"}));
    c.elements.emplace_back(detail::make_coupler("ms", sigma_ms, {"A5", "A6", "A8", "A7"}, {"B8", "B7", "B5", "B6"}));
    c.elements.emplace_back(
        detail::make_coupler("ma", sigma_ma, {"A9", "A10", "A12", "A11"}, {"B12", "B11", "B9", "B10"}));
    c.elements.emplace_back(detail::make_segment("d1", delta[0], {"A4", "A6"}, {"B6", "B4"}));
    c.elements.emplace_back(detail::make_segment("d2", delta[1], {"A3", "B7"}, {"A7", "B3"}));
    c.elements.emplace_back(detail::make_segment("d3", delta[2], {"A8", "A9"}, {"B9", "B8"}));
    c.elements.emplace_back(detail::make_segment("d4", delta[3], {"A11", "A10"}, {"B10", "B11"}));
    c.elements.emplace_back(detail::make_segment("d5", delta[4], {"A12", "A5"}, {"B5", "B12"}));
    c.ports = {{"port1", detail::L("A1"), detail::L("B1")}, {"port2", detail::L("A2"), detail::L("B2")}};
    c.probe = DipoleProbe{"d5", offset};
    return detail::checked(std::move(c));
}

}  // namespace asymfield
