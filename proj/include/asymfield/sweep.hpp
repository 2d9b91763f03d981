#pragma once

// 1D / 2D parameter sweeps over a Model, evaluated on a worker pool and
// tabulated as CSV in grid order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "asymfield/angles.hpp"
#include "asymfield/model.hpp"

namespace asymfield {

struct Axis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 2;
    bool log = false;

    void check() const {
        if (count < 2) throw ValidationError("axis " + name + ": count must be at least 2");
        if (!std::isfinite(start) || !std::isfinite(stop)) throw ValidationError("axis " + name + ": endpoints must be finite");
        if (log && !(start > 0.0 && stop > 0.0)) {
            throw ValidationError("axis " + name + ": log spacing requires positive endpoints");
        }
    }

    double value(std::size_t i) const {
        if (i == 0) return start;
        if (i + 1 == count) return stop;
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        if (log) return std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
        return start + t * (stop - start);
    }
};

/// Parses `name=start:stop:count[,log]`; endpoints accept pi literals.
inline Axis parse_axis(std::string_view spec) {
    const auto eq = spec.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ValidationError("bad axis '" + std::string(spec) + "'");
    Axis a;
    a.name = std::string(spec.substr(0, eq));
    std::string_view rest = spec.substr(eq + 1);
    if (const auto comma = rest.find(','); comma != std::string_view::npos) {
        const auto mode = rest.substr(comma + 1);
        if (mode == "log") a.log = true;
        else if (mode != "lin" && mode != "linear") throw ValidationError("bad axis spacing '" + std::string(mode) + "'");
        rest = rest.substr(0, comma);
    }
    std::vector<std::string_view> parts;
    for (std::size_t pos = 0;;) {
        const auto colon = rest.find(':', pos);
        parts.push_back(rest.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos) break;
        pos = colon + 1;
    }
    if (parts.size() != 3) throw ValidationError("bad axis '" + std::string(spec) + "': expected start:stop:count");
    const auto start = parse_real(parts[0]);
    const auto stop = parse_real(parts[1]);
    const auto count = parse_real(parts[2]);
    if (!start || !stop) throw ValidationError("bad axis endpoints in '" + std::string(spec) + "'");
    if (!count || *count < 0 || *count != std::floor(*count)) {
        throw ValidationError("bad axis count in '" + std::string(spec) + "'");
    }
    a.start = *start;
    a.stop = *stop;
    a.count = static_cast<std::size_t>(*count);
    a.check();
    return a;
}

struct SweepGrid {
    std::vector<Axis> axes;
    std::vector<std::string> observables;  // empty: model defaults

    void check() const {
        if (axes.empty() || axes.size() > 2) throw ValidationError("a sweep needs one or two axes");
        for (const auto& a : axes) a.check();
        if (axes.size() == 2 && axes[0].name == axes[1].name) throw ValidationError("axes must differ");
    }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.count;
        return n;
    }

    /// Axis values at flat row index; axis 1 is the outer loop.
    std::vector<double> coordinates(std::size_t row) const {
        if (axes.size() == 1) return {axes[0].value(row)};
        return {axes[0].value(row / axes[1].count), axes[1].value(row % axes[1].count)};
    }
};

/// Default observable columns for a model.
inline std::vector<std::string> default_observables(const Model& model) {
    std::vector<std::string> out{"gamma_ratio", "gamma_total"};
    const auto labels = model.port_labels();
    for (const auto& l : labels) out.push_back("P_" + l);
    for (const auto& l : labels) out.push_back("f2_" + l);
    return out;
}

inline double observable(const Evaluation& ev, std::string_view name) {
    if (name == "gamma_ratio") return ev.rates.total_ratio();
    if (name == "gamma_total") return ev.rates.gamma_total;
    if (name == "gamma_wg") return ev.rates.gamma_wg;
    if (name == "gamma_free") return ev.rates.gamma_free;
    if (name == "q" || name == "purcell_hf") {
        if (!ev.sigma || !ev.mode.length) throw ValidationError(std::string(name) + " needs a ring with a length");
        return name == "q" ? q_from_sigma(*ev.sigma, ev.mode).value : purcell_highfinesse(*ev.sigma, ev.mode).value;
    }
    if (name.starts_with("P_")) {
        for (const auto& p : ev.rates.ports) {
            if (p.port == name.substr(2)) return p.probability;
        }
    }
    if (name.starts_with("f2_")) {
        for (const auto& p : ev.enhancement.ports) {
            if (p.port == name.substr(3)) return std::norm(p.value);
        }
    }
    throw ValidationError("unknown observable '" + std::string(name) + "'");
}

struct SweepOptions {
    Engine engine = Engine::solver;
    bool check = false;        // add a solver-vs-closed-form column
    std::size_t threads = 0;   // 0: hardware concurrency, capped by ASYMFIELD_THREADS
    AssemblyOptions assembly{};
};

inline constexpr std::string_view kCheckColumn = "check_max_abs_diff";

struct SweepRow {
    std::vector<double> coordinates;
    std::vector<double> values;
    bool singular = false;
};

struct SweepResult {
    std::vector<std::string> header;
    std::vector<SweepRow> rows;
    std::size_t singular_points = 0;
};

inline std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ASYMFIELD_THREADS")) {
        const auto cap = parse_real(env);
        if (cap && *cap >= 1.0) n = std::min(n, static_cast<std::size_t>(*cap));
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

inline double max_abs_diff(const FieldEnhancement& a, const FieldEnhancement& b) {
    double worst = 0.0;
    for (const auto& p : a.ports) worst = std::max(worst, std::abs(p.value - b.at(p.port)));
    return worst;
}

inline SweepResult run_sweep(const Model& model, const SweepGrid& grid, const SweepOptions& opts = {}) {
    grid.check();
    for (const auto& a : grid.axes) {
        if (!model.accepts(a.name)) throw ValidationError("unknown parameter '" + a.name + "' for " + model.description());
    }
    if (opts.check && !model.topology()) throw ValidationError("--check needs a template");
    const auto observables = grid.observables.empty() ? default_observables(model) : grid.observables;

    SweepResult result;
    for (const auto& a : grid.axes) result.header.push_back(a.name);
    for (const auto& o : observables) result.header.push_back(o);
    if (opts.check) result.header.emplace_back(kCheckColumn);

    const std::size_t n = grid.size();
    result.rows.resize(n);
    const std::size_t columns = observables.size() + (opts.check ? 1 : 0);

    auto evaluate_row = [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        row.coordinates = grid.coordinates(i);
        ParamMap point;
        for (std::size_t k = 0; k < grid.axes.size(); ++k) point[grid.axes[k].name] = row.coordinates[k];
        try {
            const Evaluation ev = model.evaluate(point, opts.engine, opts.assembly);
            row.values.reserve(columns);
            for (const auto& o : observables) row.values.push_back(observable(ev, o));
            if (opts.check) {
                const Engine other = opts.engine == Engine::solver ? Engine::analytic : Engine::solver;
                const Evaluation ref = model.evaluate(point, other, opts.assembly);
                row.values.push_back(max_abs_diff(ev.enhancement, ref.enhancement));
            }
        } catch (const SingularError&) {
            row.singular = true;
            row.values.assign(columns, std::numeric_limits<double>::quiet_NaN());
        }
    };

    const std::size_t workers = worker_count(opts.threads, n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                evaluate_row(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (const auto& r : result.rows) result.singular_points += r.singular ? 1 : 0;
    return result;
}

inline std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const SweepResult& r) {
    for (std::size_t i = 0; i < r.header.size(); ++i) os << (i ? "," : "") << r.header[i];
    os << '\n';
    std::string line;
    for (const auto& row : r.rows) {
        line.clear();
        for (double v : row.coordinates) {
            if (!line.empty()) line += ',';
            line += format_value(v);
        }
        for (double v : row.values) {
            line += ',';
            line += format_value(v);
        }
        os << line << '\n';
    }
}

/// Column index by header name, or npos.
inline std::size_t column_index(const SweepResult& r, std::string_view name) {
    for (std::size_t i = 0; i < r.header.size(); ++i) {
        if (r.header[i] == name) return i;
    }
    return std::string::npos;
}

/// Value of column `c` in row `i`, counting axis columns first.
inline double cell(const SweepResult& r, std::size_t i, std::size_t c) {
    const auto& row = r.rows[i];
    return c < row.coordinates.size() ? row.coordinates[c] : row.values[c - row.coordinates.size()];
}

}  // namespace asymfield
