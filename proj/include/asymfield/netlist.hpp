#pragma once

// Line-oriented netlist format:
//
//   mode n=<f> ng=<f> aeff=<m^2> lambda0=<m> [length=<m>]
//   dipole p=<C m> [nocc=<int>] [align=<f>]
//   coupler <id> sigma=<f> fwd=<inA,inB,outA,outB> bwd=<inA,inB,outA,outB>
//   segment <id> phase=<rad> [atten=<f>] fwd=<in,out> bwd=<in,out>
//   segment <id> length=<m> k0=<1/m> [atten=<f>] fwd=<in,out> bwd=<in,out>
//   scatterer <id> rho=<f> ccw=<in,out> cw=<in,out>
//   port <label> in=<link> out=<link>
//   probe segment=<id> offset=<f>
//
// '#' starts a comment. Statements are order independent.

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <utility>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "asymfield/angles.hpp"
#include "asymfield/circuit.hpp"
#include "asymfield/emission.hpp"
#include "asymfield/errors.hpp"

namespace asymfield {

/// A parsed netlist document: the network plus the scalar mode and dipole data.
struct Netlist {
    Circuit circuit;
    ModeContext mode;
    DipoleSpec dipole;

    friend bool operator==(const Netlist&, const Netlist&) = default;
};

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column = 0;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size() || line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

struct Field {
    std::string_view value;
    std::size_t column = 0;  // column of the value
};

class Statement {
public:
    Statement(std::size_t line, std::vector<Token> tokens, std::size_t first_field,
              std::set<std::string_view> allowed)
        : line_(line), head_(tokens.front()) {
        for (std::size_t i = first_field; i < tokens.size(); ++i) {
            const auto& tok = tokens[i];
            const auto eq = tok.text.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw ParseError("expected key=value, got '" + std::string(tok.text) + "'", line, tok.column);
            }
            const auto key = tok.text.substr(0, eq);
            if (allowed.count(key) == 0) {
                throw ParseError("unknown key '" + std::string(key) + "' for " + std::string(head_.text), line,
                                 tok.column);
            }
            if (fields_.count(key) != 0) {
                throw ParseError("duplicate key '" + std::string(key) + "'", line, tok.column);
            }
            fields_[key] = {tok.text.substr(eq + 1), tok.column + eq + 1};
        }
    }

    bool has(std::string_view key) const { return fields_.count(key) != 0; }

    const Field& field(std::string_view key) const {
        const auto it = fields_.find(key);
        if (it == fields_.end()) {
            throw ParseError("missing key '" + std::string(key) + "' for " + std::string(head_.text), line_,
                             head_.column);
        }
        return it->second;
    }

    double number(std::string_view key) const {
        const auto& f = field(key);
        const auto v = parse_real(f.value);
        if (!v || !std::isfinite(*v)) {
            throw ParseError("bad number '" + std::string(f.value) + "' for " + std::string(key), line_, f.column);
        }
        return *v;
    }

    double unit_interval(std::string_view key, bool closed_low = true) const {
        const double v = number(key);
        const bool ok = (closed_low ? v >= 0.0 : v > 0.0) && v <= 1.0;
        if (!ok) throw ParseError(std::string(key) + " out of range", line_, field(key).column);
        return v;
    }

    double positive(std::string_view key) const {
        const double v = number(key);
        if (!(v > 0.0)) throw ParseError(std::string(key) + " must be positive", line_, field(key).column);
        return v;
    }

    int non_negative_int(std::string_view key) const {
        const auto& f = field(key);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
        if (ec != std::errc{} || ptr != f.value.data() + f.value.size() || v < 0) {
            throw ParseError("bad non-negative integer '" + std::string(f.value) + "' for " + std::string(key),
                             line_, f.column);
        }
        return v;
    }

    std::string identifier(std::string_view key) const {
        const auto& f = field(key);
        if (!is_identifier(f.value)) {
            throw ParseError("bad identifier '" + std::string(f.value) + "'", line_, f.column);
        }
        return std::string(f.value);
    }

    template <std::size_t N>
    std::array<LinkId, N> links(std::string_view key) const {
        const auto& f = field(key);
        std::vector<std::pair<std::string_view, std::size_t>> parts;
        std::size_t start = 0;
        while (true) {
            const auto comma = f.value.find(',', start);
            const auto end = comma == std::string_view::npos ? f.value.size() : comma;
            parts.emplace_back(f.value.substr(start, end - start), start);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (parts.size() != N) {
            throw ParseError(std::string(key) + " expects " + std::to_string(N) + " links", line_, f.column);
        }
        std::array<LinkId, N> out;
        for (std::size_t i = 0; i < N; ++i) {
            if (!is_identifier(parts[i].first)) {
                throw ParseError("bad link name '" + std::string(parts[i].first) + "'", line_,
                                 f.column + parts[i].second);
            }
            out[i] = LinkId(std::string(parts[i].first));
        }
        return out;
    }

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
    Token head_;
    std::map<std::string_view, Field, std::less<>> fields_;
};

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Parses and validates a netlist. Throws ParseError for lexical or per-line
/// problems and ValidationError for network-level problems (dangling links,
/// missing ports).
inline Netlist parse_netlist(std::string_view text) {
    Netlist out;
    std::optional<std::size_t> mode_line;
    std::optional<std::size_t> dipole_line;
    std::optional<std::size_t> probe_line;
    std::set<std::string> element_ids;
    std::set<std::string> port_labels;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        auto tokens = detail::tokenize_line(line);
        if (tokens.empty()) continue;
        const auto keyword = tokens.front().text;

        auto named = [&](std::set<std::string_view> keys) {
            if (tokens.size() < 2 || tokens[1].text.find('=') != std::string_view::npos) {
                throw ParseError(std::string(keyword) + " needs an identifier", line_no, tokens.front().column);
            }
            if (!is_identifier(tokens[1].text)) {
                throw ParseError("bad identifier '" + std::string(tokens[1].text) + "'", line_no, tokens[1].column);
            }
            return detail::Statement(line_no, tokens, 2, std::move(keys));
        };
        auto claim_id = [&](std::set<std::string>& pool, const detail::Token& tok) {
            if (!pool.insert(std::string(tok.text)).second) {
                throw ParseError("duplicate identifier " + std::string(tok.text), line_no, tok.column);
            }
        };

        if (keyword == "mode") {
            if (mode_line) throw ParseError("mode declared twice", line_no, tokens.front().column);
            mode_line = line_no;
            detail::Statement st(line_no, tokens, 1, {"n", "ng", "aeff", "lambda0", "length"});
            out.mode.n = st.positive("n");
            out.mode.ng = st.positive("ng");
            out.mode.aeff = st.positive("aeff");
            out.mode.lambda0 = st.positive("lambda0");
            if (st.has("length")) out.mode.length = st.positive("length");
        } else if (keyword == "dipole") {
            if (dipole_line) throw ParseError("dipole declared twice", line_no, tokens.front().column);
            dipole_line = line_no;
            detail::Statement st(line_no, tokens, 1, {"p", "nocc", "align"});
            out.dipole.moment = st.positive("p");
            if (st.has("nocc")) out.dipole.occupation = st.non_negative_int("nocc");
            if (st.has("align")) out.dipole.alignment = st.unit_interval("align");
        } else if (keyword == "coupler") {
            const auto st = named({"sigma", "fwd", "bwd"});
            claim_id(element_ids, tokens[1]);
            Coupler c;
            c.id = std::string(tokens[1].text);
            c.sigma = st.unit_interval("sigma");
            const auto fwd = st.links<4>("fwd");
            const auto bwd = st.links<4>("bwd");
            c.fwd_in = {fwd[0], fwd[1]};
            c.fwd_out = {fwd[2], fwd[3]};
            c.bwd_in = {bwd[0], bwd[1]};
            c.bwd_out = {bwd[2], bwd[3]};
            out.circuit.elements.emplace_back(std::move(c));
        } else if (keyword == "segment") {
            const auto st = named({"phase", "length", "k0", "atten", "fwd", "bwd"});
            claim_id(element_ids, tokens[1]);
            Segment s;
            s.id = std::string(tokens[1].text);
            if (st.has("phase")) {
                if (st.has("length") || st.has("k0")) {
                    throw ParseError("give either phase or length+k0", line_no, st.field("phase").column);
                }
                s.phase = st.number("phase");
            } else {
                s.phase = st.number("k0") * st.number("length");
            }
            if (st.has("atten")) s.atten = st.unit_interval("atten", false);
            const auto fwd = st.links<2>("fwd");
            const auto bwd = st.links<2>("bwd");
            s.fwd_in = fwd[0];
            s.fwd_out = fwd[1];
            s.bwd_in = bwd[0];
            s.bwd_out = bwd[1];
            out.circuit.elements.emplace_back(std::move(s));
        } else if (keyword == "scatterer") {
            const auto st = named({"rho", "ccw", "cw"});
            claim_id(element_ids, tokens[1]);
            Scatterer sc;
            sc.id = std::string(tokens[1].text);
            sc.rho = st.unit_interval("rho");
            const auto ccw = st.links<2>("ccw");
            const auto cw = st.links<2>("cw");
            sc.ccw_in = ccw[0];
            sc.ccw_out = ccw[1];
            sc.cw_in = cw[0];
            sc.cw_out = cw[1];
            out.circuit.elements.emplace_back(std::move(sc));
        } else if (keyword == "port") {
            const auto st = named({"in", "out"});
            claim_id(port_labels, tokens[1]);
            out.circuit.ports.push_back(
                {std::string(tokens[1].text), LinkId(st.identifier("in")), LinkId(st.identifier("out"))});
        } else if (keyword == "probe") {
            if (probe_line) throw ParseError("multiple probes", line_no, tokens.front().column);
            probe_line = line_no;
            detail::Statement st(line_no, tokens, 1, {"segment", "offset"});
            out.circuit.probe = DipoleProbe{st.identifier("segment"), st.unit_interval("offset")};
        } else {
            throw ParseError("unknown statement '" + std::string(keyword) + "'", line_no, tokens.front().column);
        }
    }

    if (!mode_line) throw ParseError("missing mode statement", line_no, 1);
    if (!dipole_line) throw ParseError("missing dipole statement", line_no, 1);
    if (!probe_line) throw ParseError("no dipole probe", line_no, 1);
    require_valid(out.circuit);
    return out;
}

/// Writes a netlist that parses back to an identical document.
inline std::string serialize_netlist(const Netlist& nl) {
    using detail::fmt_real;
    std::ostringstream os;
    os << "mode n=" << fmt_real(nl.mode.n) << " ng=" << fmt_real(nl.mode.ng) << " aeff=" << fmt_real(nl.mode.aeff)
       << " lambda0=" << fmt_real(nl.mode.lambda0);
    if (nl.mode.length) os << " length=" << fmt_real(*nl.mode.length);
    os << "\ndipole p=" << fmt_real(nl.dipole.moment) << " nocc=" << nl.dipole.occupation;
    if (nl.dipole.alignment != 1.0) os << " align=" << fmt_real(nl.dipole.alignment);
    os << '\n';
    for (const auto& e : nl.circuit.elements) {
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, Coupler>) {
                    os << "coupler " << el.id << " sigma=" << fmt_real(el.sigma) << " fwd=" << el.fwd_in[0].name
                       << ',' << el.fwd_in[1].name << ',' << el.fwd_out[0].name << ',' << el.fwd_out[1].name
                       << " bwd=" << el.bwd_in[0].name << ',' << el.bwd_in[1].name << ',' << el.bwd_out[0].name
                       << ',' << el.bwd_out[1].name;
                } else if constexpr (std::is_same_v<T, Segment>) {
                    os << "segment " << el.id << " phase=" << fmt_real(el.phase);
                    if (!el.lossless()) os << " atten=" << fmt_real(el.atten);
                    os << " fwd=" << el.fwd_in.name << ',' << el.fwd_out.name << " bwd=" << el.bwd_in.name << ','
                       << el.bwd_out.name;
                } else {
                    os << "scatterer " << el.id << " rho=" << fmt_real(el.rho) << " ccw=" << el.ccw_in.name << ','
                       << el.ccw_out.name << " cw=" << el.cw_in.name << ',' << el.cw_out.name;
                }
            },
            e);
        os << '\n';
    }
    for (const auto& p : nl.circuit.ports) {
        os << "port " << p.label << " in=" << p.in.name << " out=" << p.out.name << '\n';
    }
    if (nl.circuit.probe) {
        os << "probe segment=" << nl.circuit.probe->segment << " offset=" << fmt_real(nl.circuit.probe->offset)
           << '\n';
    }
    return os.str();
}

}  // namespace asymfield
