#pragma once

// Named-parameter front end shared by the CLI and the sweep engine. A Model
// is a template topology or a parsed netlist plus fixed parameter overrides;
// evaluate() resolves a parameter point and runs either engine.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "asymfield/analytic.hpp"
#include "asymfield/circuit.hpp"
#include "asymfield/emission.hpp"
#include "asymfield/netlist.hpp"
#include "asymfield/netsolver.hpp"
#include "asymfield/templates.hpp"

namespace asymfield {

enum class Engine { analytic, solver };
enum class Topology { waveguide, ring, backscatter, sagnac };

inline std::optional<Engine> engine_from_name(std::string_view s) {
    if (s == "analytic") return Engine::analytic;
    if (s == "solver") return Engine::solver;
    return std::nullopt;
}

inline std::string_view engine_name(Engine e) { return e == Engine::analytic ? "analytic" : "solver"; }

inline std::optional<Topology> topology_from_name(std::string_view s) {
    if (s == "waveguide") return Topology::waveguide;
    if (s == "ring") return Topology::ring;
    if (s == "backscatter" || s == "ring_backscatter") return Topology::backscatter;
    if (s == "sagnac") return Topology::sagnac;
    return std::nullopt;
}

inline std::string_view topology_name(Topology t) {
    switch (t) {
        case Topology::waveguide: return "waveguide";
        case Topology::ring: return "ring";
        case Topology::backscatter: return "backscatter";
        case Topology::sagnac: return "sagnac";
    }
    return "";
}

using ParamMap = std::map<std::string, double, std::less<>>;

struct ParamInfo {
    std::string_view name;
    double default_value;
    bool derived;  // sets one or more base parameters instead of being stored
};

inline const std::vector<ParamInfo>& topology_params(Topology t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    static const std::vector<ParamInfo> waveguide{{"delta", 0.0, false}, {"s", 0.5, false}, {"atten", 1.0, false}};
    static const std::vector<ParamInfo> ring{
        {"sigma", 0.98, false}, {"delta0", 0.0, false}, {"s", 0.25, false}, {"atten", 1.0, false}};
    static const std::vector<ParamInfo> backscatter{{"sigma", 0.98, false}, {"rho", 0.017, false},
                                                    {"delta1", 0.0, false}, {"delta2", two_pi, false},
                                                    {"s", 0.0, false},      {"Delta", 0.0, true}};
    static const std::vector<ParamInfo> sagnac{
        {"sigma_s", std::numbers::sqrt2 / 2.0, false},
        {"sigma_ms", 0.98, false},
        {"sigma_ma", 0.7, false},
        {"delta1", 0.0, false},
        {"delta2", 0.0, false},
        {"delta3", 0.0, false},
        {"delta4", two_pi, false},
        {"delta5", two_pi, false},
        {"s", 0.625, false},
        {"delta_s", 0.0, true},
        {"delta_m", 0.0, true},
        {"delta_a", 0.0, true},
        {"dtilde0", 0.0, true},
    };
    switch (t) {
        case Topology::waveguide: return waveguide;
        case Topology::ring: return ring;
        case Topology::backscatter: return backscatter;
        case Topology::sagnac: return sagnac;
    }
    return ring;
}

/// Mode and dipole parameters accepted by every model.
inline const std::vector<std::string_view>& physical_params() {
    static const std::vector<std::string_view> names{"lambda0", "n", "ng", "aeff", "length", "p", "nocc", "align"};
    return names;
}

struct Evaluation {
    FieldEnhancement enhancement;
    RateReport rates;
    ModeContext mode;
    DipoleSpec dipole;
    std::optional<double> sigma;  // ring coupling, when the model has one
};

class Model {
public:
    static Model from_template(Topology t, ParamMap fixed = {}) {
        Model m;
        m.source_ = t;
        m.fixed_ = std::move(fixed);
        m.check_names(m.fixed_);
        return m;
    }

    static Model from_netlist(Netlist nl, ParamMap fixed = {}) {
        Model m;
        m.mode_ = nl.mode;
        m.dipole_ = nl.dipole;
        m.source_ = std::move(nl);
        m.fixed_ = std::move(fixed);
        m.check_names(m.fixed_);
        return m;
    }

    std::optional<Topology> topology() const {
        if (const auto* t = std::get_if<Topology>(&source_)) return *t;
        return std::nullopt;
    }

    std::string description() const {
        if (const auto t = topology()) return std::string(topology_name(*t));
        return "netlist";
    }

    const ParamMap& fixed() const { return fixed_; }

    bool accepts(std::string_view name) const {
        for (const auto& p : physical_params()) {
            if (p == name) return true;
        }
        if (const auto t = topology()) {
            for (const auto& p : topology_params(*t)) {
                if (p.name == name) return true;
            }
            return false;
        }
        return netlist_target(name).has_value();
    }

    void check_names(const ParamMap& params) const {
        for (const auto& [name, value] : params) {
            if (!accepts(name)) throw ValidationError("unknown parameter '" + name + "' for " + description());
        }
    }

    /// Base parameter values after applying fixed overrides, the point and
    /// any derived parameters. Only meaningful for templates.
    ParamMap resolve(const ParamMap& point = {}) const {
        ParamMap merged = fixed_;
        for (const auto& [k, v] : point) merged[k] = v;
        ParamMap base;
        const auto t = topology();
        if (!t) return merged;
        for (const auto& p : topology_params(*t)) {
            if (p.derived) continue;
            const auto it = merged.find(p.name);
            base[std::string(p.name)] = it != merged.end() ? it->second : p.default_value;
        }
        auto has = [&](const char* k) { return merged.count(k) != 0; };
        if (*t == Topology::backscatter && has("Delta")) {
            const double d2 = base["delta2"];
            const double s = d2 != 0.0 ? merged.at("Delta") / d2 : -1.0;
            if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("Delta must lie within arc 2 (0 <= Delta <= delta2)");
            base["s"] = s;
        }
        if (*t == Topology::sagnac) {
            if (has("delta_s")) base["delta2"] = merged.at("delta_s") - base["delta1"];
            if (has("delta_m")) base["delta5"] = merged.at("delta_m") - base["delta3"];
            if (has("delta_a")) base["delta4"] = merged.at("delta_a");
            if (has("dtilde0")) {
                const double dm = base["delta3"] + base["delta5"];
                const double d5 = base["delta5"];
                const double s = d5 != 0.0 ? ((merged.at("dtilde0") + dm) / 2.0 - base["delta1"] - base["delta3"]) / d5
                                           : -1.0;
                if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("dtilde0 not reachable on arc 5 of the main ring");
                base["s"] = s;
            }
        }
        for (const auto& p : physical_params()) {
            if (const auto it = merged.find(p); it != merged.end()) base[std::string(p)] = it->second;
        }
        return base;
    }

    /// Circuit at a parameter point.
    Circuit circuit(const ParamMap& point = {}) const {
        check_names(point);
        if (const auto t = topology()) {
            const auto b = resolve(point);
            switch (*t) {
                case Topology::waveguide: return template_waveguide(b.at("delta"), b.at("s"), b.at("atten"));
                case Topology::ring: return template_ring(b.at("sigma"), b.at("delta0"), b.at("s"), b.at("atten"));
                case Topology::backscatter:
                    return template_ring_backscatter(b.at("sigma"), b.at("rho"), b.at("delta1"), b.at("delta2"),
                                                     b.at("s"));
                case Topology::sagnac:
                    return template_sagnac_device(b.at("sigma_s"), b.at("sigma_ms"), b.at("sigma_ma"),
                                                  {b.at("delta1"), b.at("delta2"), b.at("delta3"), b.at("delta4"),
                                                   b.at("delta5")},
                                                  b.at("s"));
            }
        }
        Circuit c = std::get<Netlist>(source_).circuit;
        ParamMap merged = fixed_;
        for (const auto& [k, v] : point) merged[k] = v;
        for (const auto& [name, value] : merged) apply_netlist_param(c, name, value);
        require_valid(c);
        return c;
    }

    /// Closed-form enhancements; templates only, lossless only.
    FieldEnhancement analytic_enhancement(const ParamMap& point = {}) const {
        check_names(point);
        const auto t = topology();
        if (!t) throw ValidationError("the analytic engine needs a template, not a netlist");
        const auto b = resolve(point);
        if (b.count("atten") != 0 && b.at("atten") != 1.0) {
            throw ValidationError("closed forms are lossless; use the solver engine for atten < 1");
        }
        // Range checks shared with the solver path.
        (void)circuit(point);
        FieldEnhancement f;
        switch (*t) {
            case Topology::waveguide: {
                const double d = b.at("delta");
                const double s = b.at("s");
                const auto p = analytic::waveguide_enhancements(s * d, d - s * d);
                f.ports = {{"L", p.first}, {"R", p.second}};
                break;
            }
            case Topology::ring: {
                const double d0 = b.at("delta0");
                const auto p = analytic::ring_enhancements({b.at("sigma"), d0, b.at("s") * d0});
                f.ports = {{"L", p.first}, {"R", p.second}};
                break;
            }
            case Topology::backscatter: {
                const double d1 = b.at("delta1");
                const double d2 = b.at("delta2");
                const auto p =
                    analytic::backscatter_enhancements({b.at("sigma"), b.at("rho"), d1, d2, d1 + b.at("s") * d2});
                f.ports = {{"L", p.first}, {"R", p.second}};
                break;
            }
            case Topology::sagnac: {
                const auto p = analytic::sagnac_enhancements(sagnac_params(b));
                f.ports = {{"port1", p.first}, {"port2", p.second}};
                break;
            }
        }
        return f;
    }

    static analytic::SagnacParams sagnac_params(const ParamMap& b) {
        analytic::SagnacParams p;
        p.sigma_s = b.at("sigma_s");
        p.sigma_ms = b.at("sigma_ms");
        p.sigma_ma = b.at("sigma_ma");
        p.arc_phases = {b.at("delta1"), b.at("delta2"), b.at("delta3"), b.at("delta4"), b.at("delta5")};
        p.dipole_phase = b.at("delta3") + b.at("s") * b.at("delta5");
        return p;
    }

    std::pair<ModeContext, DipoleSpec> physics(const ParamMap& point = {}) const {
        ParamMap merged = fixed_;
        for (const auto& [k, v] : point) merged[k] = v;
        ModeContext mode = mode_;
        DipoleSpec dipole = dipole_;
        auto get = [&](const char* k) -> std::optional<double> {
            const auto it = merged.find(k);
            return it == merged.end() ? std::nullopt : std::optional<double>(it->second);
        };
        if (auto v = get("lambda0")) mode.lambda0 = *v;
        if (auto v = get("n")) mode.n = *v;
        if (auto v = get("ng")) mode.ng = *v;
        if (auto v = get("aeff")) mode.aeff = *v;
        if (auto v = get("length")) mode.length = *v;
        if (auto v = get("p")) dipole.moment = *v;
        if (auto v = get("nocc")) {
            if (*v < 0.0 || *v != std::floor(*v)) throw ValidationError("nocc must be a non-negative integer");
            dipole.occupation = static_cast<int>(*v);
        }
        if (auto v = get("align")) dipole.alignment = *v;
        mode.check();
        dipole.check();
        return {mode, dipole};
    }

    Evaluation evaluate(const ParamMap& point, Engine engine, const AssemblyOptions& opts = {}) const {
        Evaluation ev;
        std::tie(ev.mode, ev.dipole) = physics(point);
        if (engine == Engine::analytic) {
            ev.enhancement = analytic_enhancement(point);
        } else {
            ev.enhancement = solve_network(circuit(point), opts).enhancement;
        }
        ev.rates = rates_from_enhancements(ev.enhancement, ev.mode, ev.dipole);
        if (topology() == Topology::ring || topology() == Topology::backscatter) ev.sigma = resolve(point).at("sigma");
        return ev;
    }

    std::vector<std::string> port_labels() const {
        std::vector<std::string> out;
        for (const auto& p : circuit().ports) out.push_back(p.label);
        return out;
    }

private:
    struct NetlistTarget {
        std::string element;
        std::string field;
    };

    std::optional<NetlistTarget> netlist_target(std::string_view name) const {
        const auto* nl = std::get_if<Netlist>(&source_);
        if (nl == nullptr) return std::nullopt;
        const auto dot = name.find('.');
        if (dot == std::string_view::npos) return std::nullopt;
        NetlistTarget t{std::string(name.substr(0, dot)), std::string(name.substr(dot + 1))};
        if (t.element == "probe") return t.field == "offset" ? std::optional(t) : std::nullopt;
        for (const auto& e : nl->circuit.elements) {
            if (element_id(e) != t.element) continue;
            const bool ok = std::visit(
                [&](const auto& el) {
                    using T = std::decay_t<decltype(el)>;
                    if constexpr (std::is_same_v<T, Coupler>) return t.field == "sigma";
                    else if constexpr (std::is_same_v<T, Segment>) return t.field == "phase" || t.field == "atten";
                    else return t.field == "rho";
                },
                e);
            return ok ? std::optional(t) : std::nullopt;
        }
        return std::nullopt;
    }

    void apply_netlist_param(Circuit& c, std::string_view name, double value) const {
        for (const auto& p : physical_params()) {
            if (p == name) return;
        }
        const auto t = netlist_target(name);
        if (!t) throw ValidationError("unknown parameter '" + std::string(name) + "' for netlist");
        if (t->element == "probe") {
            c.probe->offset = value;
            return;
        }
        for (auto& e : c.elements) {
            if (element_id(e) != t->element) continue;
            std::visit(
                [&](auto& el) {
                    using T = std::decay_t<decltype(el)>;
                    if constexpr (std::is_same_v<T, Coupler>) el.sigma = value;
                    else if constexpr (std::is_same_v<T, Segment>) (t->field == "phase" ? el.phase : el.atten) = value;
                    else el.rho = value;
                },
                e);
        }
    }

    std::variant<Topology, Netlist> source_;
    ParamMap fixed_;
    ModeContext mode_;
    DipoleSpec dipole_;
};

}  // namespace asymfield
