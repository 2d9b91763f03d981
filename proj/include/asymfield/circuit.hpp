#pragma once

// Directed-link scattering network: couplers, phase segments, lumped
// scatterers, external ports and a single dipole probe. Every waveguide arc
// carries two independent directed amplitudes, each one a LinkId.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "asymfield/errors.hpp"

namespace asymfield {

/// One directed mode amplitude on a waveguide arc.
struct LinkId {
    std::string name;

    LinkId() = default;
    explicit LinkId(std::string n) : name(std::move(n)) {}

    friend bool operator==(const LinkId&, const LinkId&) = default;
    friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

/// Point coupler between two guides. In each direction the "a" input feeds the
/// "a" output through the self-coupling sigma and the "b" output through
/// i*kappa. Forward and backward are two decoupled 2x2 relations.
struct Coupler {
    std::string id;
    double sigma = 0.0;
    std::array<LinkId, 2> fwd_in;
    std::array<LinkId, 2> fwd_out;
    std::array<LinkId, 2> bwd_in;
    std::array<LinkId, 2> bwd_out;

    double kappa() const { return std::sqrt(std::max(0.0, 1.0 - sigma * sigma)); }

    friend bool operator==(const Coupler&, const Coupler&) = default;
};

/// Propagation along an arc: out = atten * exp(i*phase) * in, both directions.
/// The phase is stored unreduced.
struct Segment {
    std::string id;
    double phase = 0.0;
    double atten = 1.0;
    LinkId fwd_in;
    LinkId fwd_out;
    LinkId bwd_in;
    LinkId bwd_out;

    bool lossless() const { return atten == 1.0; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Lumped reflector mixing the two counter-propagating directions.
struct Scatterer {
    std::string id;
    double rho = 0.0;
    LinkId ccw_in;
    LinkId ccw_out;
    LinkId cw_in;
    LinkId cw_out;

    double tau() const { return std::sqrt(std::max(0.0, 1.0 - rho * rho)); }

    friend bool operator==(const Scatterer&, const Scatterer&) = default;
};

using Element = std::variant<Coupler, Segment, Scatterer>;

struct ExternalPort {
    std::string label;
    LinkId in;
    LinkId out;

    friend bool operator==(const ExternalPort&, const ExternalPort&) = default;
};

/// Dipole position as a fraction of its host segment, measured from the end
/// where the forward direction enters.
struct DipoleProbe {
    std::string segment;
    double offset = 0.5;

    friend bool operator==(const DipoleProbe&, const DipoleProbe&) = default;
};

/// Phases accumulated from each end of the host segment up to the probe.
struct ProbeSplit {
    double ccw_phase = 0.0;  // from the forward input
    double cw_phase = 0.0;   // from the backward input
};

inline ProbeSplit probe_split(const Segment& host, double offset) {
    const double ccw = offset * host.phase;
    return {ccw, host.phase - ccw};
}

inline std::string_view element_id(const Element& e) {
    return std::visit([](const auto& el) -> std::string_view { return el.id; }, e);
}

struct Circuit {
    std::vector<Element> elements;
    std::vector<ExternalPort> ports;
    std::optional<DipoleProbe> probe;

    bool lossless() const {
        return std::none_of(elements.begin(), elements.end(), [](const Element& e) {
            const auto* seg = std::get_if<Segment>(&e);
            return seg != nullptr && !seg->lossless();
        });
    }

    const Segment* find_segment(std::string_view id) const {
        for (const auto& e : elements) {
            if (const auto* seg = std::get_if<Segment>(&e); seg != nullptr && seg->id == id) {
                return seg;
            }
        }
        return nullptr;
    }

    const ExternalPort* find_port(std::string_view label) const {
        for (const auto& p : ports) {
            if (p.label == label) return &p;
        }
        return nullptr;
    }

    /// All links in order of first mention (elements, then ports). This order
    /// fixes the unknown numbering of the assembled system.
    std::vector<LinkId> links() const {
        std::vector<LinkId> out;
        std::set<LinkId> seen;
        auto add = [&](const LinkId& l) {
            if (seen.insert(l).second) out.push_back(l);
        };
        for (const auto& e : elements) {
            std::visit(
                [&](const auto& el) {
                    using T = std::decay_t<decltype(el)>;
                    if constexpr (std::is_same_v<T, Coupler>) {
                        for (const auto& l : el.fwd_in) add(l);
                        for (const auto& l : el.fwd_out) add(l);
                        for (const auto& l : el.bwd_in) add(l);
                        for (const auto& l : el.bwd_out) add(l);
                    } else if constexpr (std::is_same_v<T, Segment>) {
                        add(el.fwd_in);
                        add(el.fwd_out);
                        add(el.bwd_in);
                        add(el.bwd_out);
                    } else {
                        add(el.ccw_in);
                        add(el.ccw_out);
                        add(el.cw_in);
                        add(el.cw_out);
                    }
                },
                e);
        }
        for (const auto& p : ports) {
            add(p.in);
            add(p.out);
        }
        return out;
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

/// Checks every structural and parameter invariant. Returns one message per
/// problem; an empty list means the circuit can be assembled.
inline std::vector<std::string> validate(const Circuit& circuit) {
    std::vector<std::string> diags;
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };

    std::set<std::string> ids;
    std::map<LinkId, int> drivers;
    std::map<LinkId, int> consumers;
    auto drive = [&](const LinkId& l) { ++drivers[l]; consumers.try_emplace(l, 0); };
    auto consume = [&](const LinkId& l) { ++consumers[l]; drivers.try_emplace(l, 0); };

    for (const auto& e : circuit.elements) {
        const std::string id(element_id(e));
        if (!is_identifier(id)) diags.push_back("invalid identifier '" + id + "'");
        if (!ids.insert(id).second) diags.push_back("duplicate identifier " + id);

        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, Coupler>) {
                    if (!in_unit(el.sigma)) diags.push_back("sigma out of range for coupler " + id);
                    for (const auto& l : el.fwd_in) consume(l);
                    for (const auto& l : el.bwd_in) consume(l);
                    for (const auto& l : el.fwd_out) drive(l);
                    for (const auto& l : el.bwd_out) drive(l);
                    std::set<LinkId> fwd{el.fwd_in[0], el.fwd_in[1], el.fwd_out[0], el.fwd_out[1]};
                    for (const auto& l : {el.bwd_in[0], el.bwd_in[1], el.bwd_out[0], el.bwd_out[1]}) {
                        if (fwd.count(l) != 0) {
                            diags.push_back("coupler " + id + " forward and backward pairs share link " +
                                            l.name);
                        }
                    }
                } else if constexpr (std::is_same_v<T, Segment>) {
                    if (!std::isfinite(el.phase)) diags.push_back("phase not finite for segment " + id);
                    if (!(std::isfinite(el.atten) && el.atten > 0.0 && el.atten <= 1.0)) {
                        diags.push_back("atten out of range for segment " + id);
                    }
                    consume(el.fwd_in);
                    consume(el.bwd_in);
                    drive(el.fwd_out);
                    drive(el.bwd_out);
                } else {
                    if (!in_unit(el.rho)) diags.push_back("rho out of range for scatterer " + id);
                    consume(el.ccw_in);
                    consume(el.cw_in);
                    drive(el.ccw_out);
                    drive(el.cw_out);
                }
            },
            e);
    }

    if (circuit.ports.empty()) diags.push_back("no external ports");
    std::set<std::string> labels;
    for (const auto& p : circuit.ports) {
        if (!is_identifier(p.label)) diags.push_back("invalid port label '" + p.label + "'");
        if (!labels.insert(p.label).second) diags.push_back("duplicate port label " + p.label);
        drive(p.in);
        consume(p.out);
    }

    for (const auto& [link, n] : drivers) {
        if (!is_identifier(link.name)) diags.push_back("invalid link name '" + link.name + "'");
        if (n == 0) {
            diags.push_back("link " + link.name + " has no driver");
        } else if (n > 1) {
            diags.push_back("link " + link.name + " has " + std::to_string(n) + " drivers");
        }
    }
    for (const auto& [link, n] : consumers) {
        if (n == 0) {
            diags.push_back("link " + link.name + " has no consumer");
        } else if (n > 1) {
            diags.push_back("link " + link.name + " has " + std::to_string(n) + " consumers");
        }
    }

    if (!circuit.probe) {
        diags.push_back("no dipole probe");
    } else {
        if (circuit.find_segment(circuit.probe->segment) == nullptr) {
            diags.push_back("probe host segment " + circuit.probe->segment + " not found");
        }
        if (!in_unit(circuit.probe->offset)) diags.push_back("probe offset out of range");
    }
    return diags;
}

/// Throws ValidationError listing every diagnostic, if any.
inline void require_valid(const Circuit& circuit) {
    const auto diags = validate(circuit);
    if (diags.empty()) return;
    std::string msg = diags.front();
    for (std::size_t i = 1; i < diags.size(); ++i) msg += "; " + diags[i];
    throw ValidationError(msg);
}

}  // namespace asymfield

template <>
struct std::hash<asymfield::LinkId> {
    std::size_t operator()(const asymfield::LinkId& l) const noexcept {
        return std::hash<std::string>{}(l.name);
    }
};
