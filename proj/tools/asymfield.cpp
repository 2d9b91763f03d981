// asymfield: emission rates and exit-port probabilities of a dipole in a
// photonic circuit. Subcommands: rate, sweep, figure, selfcheck.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymfield/asymfield.hpp"

namespace af = asymfield;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kInput = 1, kSingular = 2, kPartial = 3, kSelfcheck = 4 };

struct Source {
    std::string template_name;
    std::string netlist_path;
    std::vector<std::string> sets;
    std::string engine = "solver";
};

void add_source_options(CLI::App& cmd, Source& src) {
    auto* t = cmd.add_option("--template", src.template_name, "waveguide | ring | backscatter | sagnac");
    auto* n = cmd.add_option("--netlist", src.netlist_path, "netlist file")->check(CLI::ExistingFile);
    t->excludes(n);
    cmd.add_option("--set", src.sets, "parameter override k=v (repeatable)");
    cmd.add_option("--engine", src.engine, "analytic | solver")->check(CLI::IsMember({"analytic", "solver"}));
    cmd.allow_extras();
}

double parse_value(const std::string& name, const std::string& text) {
    const auto v = af::parse_real(text);
    if (!v) throw af::ValidationError("bad value '" + text + "' for " + name);
    return *v;
}

// Collects --set k=v pairs and the shorthand form `--k v` / `--k=v` left over
// by the parser.
af::ParamMap collect_params(const Source& src, const std::vector<std::string>& extras) {
    af::ParamMap out;
    auto put = [&](const std::string& k, const std::string& v) {
        if (k.empty()) throw af::ValidationError("empty parameter name");
        if (!out.emplace(k, parse_value(k, v)).second) throw af::ValidationError("parameter " + k + " given twice");
    };
    for (const auto& s : src.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw af::ValidationError("--set expects k=v, got '" + s + "'");
        put(s.substr(0, eq), s.substr(eq + 1));
    }
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const auto& a = extras[i];
        if (a.rfind("--", 0) != 0) throw af::ValidationError("unexpected argument '" + a + "'");
        const auto body = a.substr(2);
        if (const auto eq = body.find('='); eq != std::string::npos) {
            put(body.substr(0, eq), body.substr(eq + 1));
        } else {
            if (i + 1 >= extras.size()) throw af::ValidationError("missing value for --" + body);
            put(body, extras[++i]);
        }
    }
    return out;
}

af::Model load_model(const Source& src, af::ParamMap params) {
    if (!src.netlist_path.empty()) {
        std::ifstream in(src.netlist_path);
        if (!in) throw af::ValidationError("cannot read " + src.netlist_path);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            return af::Model::from_netlist(af::parse_netlist(ss.str()), std::move(params));
        } catch (const af::ParseError& e) {
            throw af::ValidationError(src.netlist_path + ": " + e.what());
        }
    }
    const auto t = af::topology_from_name(src.template_name.empty() ? "ring" : src.template_name);
    if (!t) throw af::ValidationError("unknown template '" + src.template_name + "'");
    return af::Model::from_template(*t, std::move(params));
}

af::Engine engine_of(const Source& src) { return *af::engine_from_name(src.engine); }

void add_parameters(json& j, const af::Model& model, const af::ParamMap& point = {}) {
    for (const auto& [k, v] : model.resolve(point)) j["param." + k] = v;
    if (!model.topology()) return;
    const auto [mode, dipole] = model.physics(point);
    j["param.lambda0"] = mode.lambda0;
    j["param.n"] = mode.n;
    j["param.ng"] = mode.ng;
    j["param.aeff"] = mode.aeff;
    if (mode.length) j["param.length"] = *mode.length;
    j["param.p"] = dipole.moment;
    j["param.nocc"] = dipole.occupation;
    j["param.align"] = dipole.alignment;
}

int cmd_rate(const Source& src, const std::vector<std::string>& extras) {
    const auto model = load_model(src, collect_params(src, extras));
    const auto ev = model.evaluate({}, engine_of(src));

    json j;
    j["version"] = af::kVersion;
    j["source"] = src.netlist_path.empty() ? model.description() : src.netlist_path;
    j["engine"] = src.engine;
    j["gamma_wg"] = ev.rates.gamma_wg;
    j["gamma_free"] = ev.rates.gamma_free;
    j["gamma_total"] = ev.rates.gamma_total;
    j["gamma_ratio"] = ev.rates.total_ratio();
    j["purcell_wg"] = af::purcell_wg_ratio(ev.mode);
    for (const auto& p : ev.rates.ports) {
        j["rate_" + p.port] = p.rate;
        j["P_" + p.port] = p.probability;
    }
    for (const auto& p : ev.enhancement.ports) {
        j["f_" + p.port + "_re"] = p.value.real();
        j["f_" + p.port + "_im"] = p.value.imag();
        j["f2_" + p.port] = std::norm(p.value);
    }
    if (ev.sigma && ev.mode.length) {
        const auto q = af::q_from_sigma(*ev.sigma, ev.mode);
        const auto hf = af::purcell_highfinesse(*ev.sigma, ev.mode);
        j["q"] = q.value;
        j["purcell_highfinesse"] = hf.value;
        j["highfinesse_outside_validity"] = hf.outside_validity;
    }
    add_parameters(j, model);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int write_sweep(const af::SweepResult& r, const std::string& out) {
    if (out.empty() || out == "-") {
        af::write_csv(std::cout, r);
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw af::ValidationError("cannot write " + out);
        af::write_csv(f, r);
    }
    if (r.singular_points > 0) {
        std::cerr << "warning: " << r.singular_points << " of " << r.rows.size()
                  << " points hit a singular system and were written as nan\n";
        return kPartial;
    }
    return kOk;
}

int cmd_sweep(const Source& src, const std::vector<std::string>& extras, const std::vector<std::string>& axes,
              const std::vector<std::string>& observables, bool check, const std::string& out) {
    const auto model = load_model(src, collect_params(src, extras));
    af::SweepGrid grid;
    for (const auto& a : axes) grid.axes.push_back(af::parse_axis(a));
    grid.observables = observables;
    af::SweepOptions opts;
    opts.engine = engine_of(src);
    opts.check = check;
    return write_sweep(af::run_sweep(model, grid, opts), out);
}

int cmd_figure(const std::string& id, const std::string& engine, bool check, std::string out) {
    const auto* preset = af::find_preset(id);
    if (preset == nullptr) throw af::ValidationError("unknown preset '" + id + "' (fig3, fig4, fig5, fig6)");
    const auto model = af::Model::from_template(preset->topology, preset->fixed);
    af::SweepOptions opts;
    opts.engine = *af::engine_from_name(engine);
    opts.check = check;
    const auto result = af::run_sweep(model, preset->grid, opts);

    if (out.empty()) out = std::string(preset->id) + ".csv";
    const int code = write_sweep(result, out);

    json j;
    j["version"] = af::kVersion;
    j["preset"] = preset->id;
    j["description"] = preset->summary;
    j["template"] = af::topology_name(preset->topology);
    j["engine"] = engine;
    j["check"] = check;
    j["csv"] = out;
    j["rows"] = result.rows.size();
    for (std::size_t k = 0; k < preset->grid.axes.size(); ++k) {
        const auto& a = preset->grid.axes[k];
        const std::string key = "axis" + std::to_string(k + 1);
        j[key + ".name"] = a.name;
        j[key + ".start"] = a.start;
        j[key + ".stop"] = a.stop;
        j[key + ".count"] = a.count;
        j[key + ".spacing"] = a.log ? "log" : "linear";
    }
    for (const auto& [k, v] : preset->fixed) j["fixed." + k] = v;
    add_parameters(j, model);

    if (out != "-") {
        auto side = std::filesystem::path(out).replace_extension(".json");
        std::ofstream f(side);
        if (!f) throw af::ValidationError("cannot write " + side.string());
        f << j.dump(2) << '\n';
    }
    return code;
}

int cmd_selfcheck(std::uint64_t seed, std::size_t draws, bool flip) {
    af::SelfcheckOptions opts;
    opts.seed = seed;
    opts.draws = draws;
    opts.assembly.flip_backward_coupler_sign = flip;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = af::run_selfcheck(opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    af::print_report(std::cout, report);
    std::cout << "elapsed " << secs << " s\n";
    return report.passed() ? kOk : kSelfcheck;
}

void print_version() {
    std::printf("asymfield %s\n", af::kVersion);
    std::printf("constants (CODATA 2018): hbar = %.10e J s, epsilon0 = %.11e F/m, c = %.0f m/s\n",
                af::constants::hbar, af::constants::epsilon0, af::constants::c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dipole emission rates and exit-port probabilities in photonic circuits"};
    app.require_subcommand(0, 1);
    bool version = false;
    app.add_flag("--version", version, "print version and physical constants");

    Source rate_src;
    auto* rate = app.add_subcommand("rate", "evaluate one configuration, JSON report on stdout");
    add_source_options(*rate, rate_src);

    Source sweep_src;
    std::vector<std::string> axes;
    std::vector<std::string> observables;
    bool sweep_check = false;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "1D or 2D parameter sweep, CSV output");
    add_source_options(*sweep, sweep_src);
    sweep->add_option("--vary", axes, "name=start:stop:count[,log] (one or two)")->required();
    sweep->add_option("--observable", observables, "column to tabulate (repeatable)");
    sweep->add_flag("--check", sweep_check, "add a solver vs closed-form difference column");
    sweep->add_option("--out", sweep_out, "CSV file (default stdout)");

    std::string preset_id;
    std::string fig_engine = "solver";
    bool fig_check = false;
    std::string fig_out;
    auto* figure = app.add_subcommand("figure", "figure preset sweep: CSV plus sidecar JSON");
    figure->add_option("preset", preset_id, "fig3 | fig4 | fig5 | fig6")->required();
    figure->add_option("--engine", fig_engine, "analytic | solver")->check(CLI::IsMember({"analytic", "solver"}));
    figure->add_flag("--check", fig_check, "add a solver vs closed-form difference column");
    figure->add_option("--out", fig_out, "CSV file (default <preset>.csv; sidecar alongside)");

    std::uint64_t seed = af::SelfcheckOptions{}.seed;
    std::size_t draws = af::SelfcheckOptions{}.draws;
    bool flip = false;
    auto* selfcheck = app.add_subcommand("selfcheck", "run the built-in verification suites");
    selfcheck->add_option("--seed", seed, "random seed");
    selfcheck->add_option("--draws", draws, "draws per suite")->check(CLI::PositiveNumber);
    selfcheck->add_flag("--flip-coupler-sign", flip, "fault injection: flip the backward coupler sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (version) {
            print_version();
            return kOk;
        }
        if (*rate) return cmd_rate(rate_src, rate->remaining());
        if (*sweep) return cmd_sweep(sweep_src, sweep->remaining(), axes, observables, sweep_check, sweep_out);
        if (*figure) return cmd_figure(preset_id, fig_engine, fig_check, fig_out);
        if (*selfcheck) return cmd_selfcheck(seed, draws, flip);
        std::cout << app.help();
        return kInput;
    } catch (const af::SingularError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSingular;
    } catch (const af::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const af::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
}
