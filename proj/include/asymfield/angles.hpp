#pragma once

#include <charconv>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace asymfield {

namespace detail {
inline std::optional<double> parse_plain(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}
}  // namespace detail

/// Parses a real number, accepting multiples of pi: "1.5", "pi", "-pi/2",
/// "3pi/4", "2*pi", "0.25pi". Returns nullopt on malformed input.
inline std::optional<double> parse_real(std::string_view s) {
    const auto pos = s.find("pi");
    if (pos == std::string_view::npos) return detail::parse_plain(s);

    std::string_view coef = s.substr(0, pos);
    std::string_view tail = s.substr(pos + 2);
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);

    double scale = 1.0;
    if (coef == "-") {
        scale = -1.0;
    } else if (!coef.empty() && coef != "+") {
        const auto c = detail::parse_plain(coef);
        if (!c) return std::nullopt;
        scale = *c;
    }
    double denom = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') return std::nullopt;
        const auto d = detail::parse_plain(tail.substr(1));
        if (!d || *d == 0.0) return std::nullopt;
        denom = *d;
    }
    return scale * std::numbers::pi / denom;
}

}  // namespace asymfield
