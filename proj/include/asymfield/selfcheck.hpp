#pragma once

// Built-in verification suites: solver vs closed forms, S-matrix unitarity
// and reciprocity on random circuits, limit reductions, and probability
// normalization. Deterministic for a given seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "asymfield/analytic.hpp"
#include "asymfield/netsolver.hpp"
#include "asymfield/templates.hpp"

namespace asymfield {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    double tolerance = 0.0;

    bool passed() const { return cases > 0 && failures == 0; }

    void record(double err) {
        ++cases;
        if (!(err <= tolerance)) ++failures;
        if (!(err <= worst)) worst = err;  // NaN sticks
    }
};

struct SelfcheckOptions {
    std::uint64_t seed = 20240101;
    std::size_t draws = 1000;
    AssemblyOptions assembly{};
};

struct SelfcheckReport {
    std::vector<SuiteResult> suites;

    bool passed() const {
        return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
    }
};

namespace detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double relative_error(const analytic::EnhancementPair& ref, const FieldEnhancement& got) {
    const cplx a = got.ports.at(0).value;
    const cplx b = got.ports.at(1).value;
    return std::max(std::abs(a - ref.first) / (1.0 + std::abs(ref.first)),
                    std::abs(b - ref.second) / (1.0 + std::abs(ref.second)));
}

// One side of an element: the link entering it and the link leaving it.
struct Terminal {
    std::string in;
    std::string out;
};

/// Random lossless network: couplers and scatterers wired pairwise by
/// segments, leftover terminals exposed as ports. Every segment is
/// connected to at least one port.
inline Circuit random_circuit(Rng& rng, double atten = 1.0) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (;;) {
        Circuit c;
        std::vector<Terminal> terms;
        std::vector<std::size_t> owner;
        int link = 0;
        auto fresh = [&] { return "n" + std::to_string(link++); };

        const int ncoupler = std::uniform_int_distribution<int>(1, 3)(rng);
        const int nscatter = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int k = 0; k < ncoupler; ++k) {
            std::array<std::string, 8> l;
            for (auto& s : l) s = fresh();
            // fwd in a,b / out a,b, bwd in a,b / out a,b
            c.elements.emplace_back(Coupler{"c" + std::to_string(k), uniform(rng, 0.05, 0.95),
                                            {LinkId(l[0]), LinkId(l[1])}, {LinkId(l[2]), LinkId(l[3])},
                                            {LinkId(l[4]), LinkId(l[5])}, {LinkId(l[6]), LinkId(l[7])}});
            terms.push_back({l[0], l[6]});
            terms.push_back({l[1], l[7]});
            terms.push_back({l[4], l[2]});
            terms.push_back({l[5], l[3]});
            owner.insert(owner.end(), 4, c.elements.size() - 1);
        }
        for (int k = 0; k < nscatter; ++k) {
            const std::string a = fresh(), b = fresh(), d = fresh(), e = fresh();
            c.elements.emplace_back(
                Scatterer{"r" + std::to_string(k), uniform(rng, 0.0, 0.9), LinkId(a), LinkId(b), LinkId(d), LinkId(e)});
            terms.push_back({a, e});
            terms.push_back({d, b});
            owner.insert(owner.end(), 2, c.elements.size() - 1);
        }

        std::vector<std::size_t> order(terms.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t total = terms.size();
        std::size_t nports = std::uniform_int_distribution<std::size_t>(1, total - 2)(rng);
        if ((total - nports) % 2 != 0) ++nports;

        // Union-find over elements; ports attach to a virtual node.
        std::vector<std::size_t> parent(c.elements.size() + 1);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
        const std::size_t outside = c.elements.size();
        // Elements are internally connected, so unite terminals through owners.

        for (std::size_t k = 0; k < nports; ++k) {
            const auto& t = terms[order[k]];
            c.ports.push_back({"p" + std::to_string(k), LinkId(t.in), LinkId(t.out)});
            unite(owner[order[k]], outside);
        }
        std::vector<std::size_t> segment_owner;
        for (std::size_t k = nports, s = 0; k + 1 < total; k += 2, ++s) {
            const auto& x = terms[order[k]];
            const auto& y = terms[order[k + 1]];
            c.elements.emplace_back(Segment{"s" + std::to_string(s), uniform(rng, 0.0, two_pi), atten,
                                            LinkId(x.out), LinkId(y.in), LinkId(y.out), LinkId(x.in)});
            unite(owner[order[k]], owner[order[k + 1]]);
            segment_owner.push_back(owner[order[k]]);
        }
        const bool connected = std::all_of(segment_owner.begin(), segment_owner.end(),
                                           [&](std::size_t o) { return find(o) == find(outside); });
        if (!connected || segment_owner.empty()) continue;
        c.probe = DipoleProbe{"s0", uniform(rng, 0.0, 1.0)};
        require_valid(c);
        return c;
    }
}

inline double unitarity_error(const SMatrix& s) {
    double err = 0.0;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot{};
            for (std::size_t k = 0; k < n; ++k) dot += std::conj(s(k, i)) * s(k, j);
            err = std::max(err, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return err;
}

inline double reciprocity_error(const SMatrix& s) {
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) err = std::max(err, std::abs(s(i, j) - s(j, i)));
    }
    return err;
}

inline double column_norm(const SMatrix& s, std::size_t j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sum += std::norm(s(i, j));
    return sum;
}

}  // namespace detail

inline SelfcheckReport run_selfcheck(const SelfcheckOptions& opts = {}) {
    using namespace detail;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const auto& asm_opts = opts.assembly;
    Rng rng(opts.seed);
    SelfcheckReport report;

    // Oracle equivalence, one suite per topology.
    {
        SuiteResult ring{"oracle ring", 0, 0, 0.0, 1e-9};
        SuiteResult back{"oracle backscatter", 0, 0, 0.0, 1e-9};
        SuiteResult sag{"oracle sagnac", 0, 0, 0.0, 1e-9};
        for (std::size_t k = 0; k < opts.draws; ++k) {
            const double sigma = uniform(rng, 0.0, 0.999);
            const double d0 = uniform(rng, 0.0, two_pi);
            const double s = uniform(rng, 0.0, 1.0);
            const auto f = solve_network(template_ring(sigma, d0, s), asm_opts).enhancement;
            ring.record(relative_error(analytic::ring_enhancements({sigma, d0, s * d0}), f));
        }
        for (std::size_t k = 0; k < opts.draws; ++k) {
            const double sigma = uniform(rng, 0.0, 0.999);
            const double rho = uniform(rng, 0.0, 0.9);
            const double d1 = uniform(rng, 0.0, two_pi);
            const double d2 = uniform(rng, 0.0, two_pi);
            const double s = uniform(rng, 0.0, 1.0);
            const auto f = solve_network(template_ring_backscatter(sigma, rho, d1, d2, s), asm_opts).enhancement;
            back.record(relative_error(analytic::backscatter_enhancements({sigma, rho, d1, d2, d1 + s * d2}), f));
        }
        for (std::size_t k = 0; k < opts.draws; ++k) {
            analytic::SagnacParams p;
            p.sigma_s = uniform(rng, 0.0, 1.0);
            p.sigma_ms = uniform(rng, 0.0, 0.999);
            p.sigma_ma = uniform(rng, 0.0, 0.999);
            for (auto& d : p.arc_phases) d = uniform(rng, 0.0, two_pi);
            const double s = uniform(rng, 0.0, 1.0);
            p.dipole_phase = p.arc_phases[2] + s * p.arc_phases[4];
            const auto f =
                solve_network(template_sagnac_device(p.sigma_s, p.sigma_ms, p.sigma_ma, p.arc_phases, s), asm_opts)
                    .enhancement;
            sag.record(relative_error(analytic::sagnac_enhancements(p), f));
        }
        report.suites.push_back(ring);
        report.suites.push_back(back);
        report.suites.push_back(sag);
    }

    // Unitarity and reciprocity of lossless random circuits; attenuation
    // must leave every column norm <= 1 and at least one below 1.
    {
        SuiteResult unitary{"unitarity", 0, 0, 0.0, 1e-9};
        SuiteResult recip{"reciprocity", 0, 0, 0.0, 1e-9};
        SuiteResult lossy{"attenuation breaks unitarity", 0, 0, 0.0, 0.0};
        for (std::size_t k = 0; k < opts.draws; ++k) {
            const auto s = scattering_matrix(random_circuit(rng), asm_opts);
            unitary.record(unitarity_error(s));
            recip.record(reciprocity_error(s));
        }
        for (std::size_t k = 0; k < opts.draws / 10; ++k) {
            const auto s = scattering_matrix(random_circuit(rng, uniform(rng, 0.5, 0.99)), asm_opts);
            double lowest = 1.0;
            double highest = 0.0;
            for (std::size_t j = 0; j < s.size(); ++j) {
                lowest = std::min(lowest, column_norm(s, j));
                highest = std::max(highest, column_norm(s, j));
            }
            // Violation measure: zero when some column lost power and none gained.
            lossy.record((lowest < 1.0 - 1e-9 ? 0.0 : 1.0) + std::max(0.0, highest - 1.0 - 1e-12));
        }
        report.suites.push_back(unitary);
        report.suites.push_back(recip);
        report.suites.push_back(lossy);
    }

    // Limits: a vanishing scatterer recovers the plain ring, the bare
    // waveguide recovers Gamma_total = Gamma_wg with an even split.
    {
        SuiteResult rho0{"limit rho -> 0", 0, 0, 0.0, 1e-6};
        SuiteResult wg{"limit waveguide", 0, 0, 0.0, 1e-14};
        for (std::size_t k = 0; k < opts.draws; ++k) {
            const double sigma = uniform(rng, 0.0, 0.98);
            const double d1 = uniform(rng, 0.0, two_pi);
            const double d2 = uniform(rng, 0.0, two_pi);
            const double s = uniform(rng, 0.0, 1.0);
            const auto f = solve_network(template_ring_backscatter(sigma, 1e-9, d1, d2, s), asm_opts).enhancement;
            rho0.record(relative_error(analytic::ring_enhancements({sigma, d1 + d2, d1 + s * d2}), f));
        }
        for (std::size_t k = 0; k < opts.draws; ++k) {
            const auto f = solve_network(template_waveguide(uniform(rng, 0.0, two_pi), uniform(rng, 0.0, 1.0)),
                                         asm_opts)
                               .enhancement;
            const double l = std::norm(f.at("L"));
            const double r = std::norm(f.at("R"));
            const double ratio = 0.5 * (l + r);
            wg.record(std::max({std::abs(ratio - 1.0), std::abs(l / (l + r) - 0.5), std::abs(r / (l + r) - 0.5)}));
        }
        report.suites.push_back(rho0);
        report.suites.push_back(wg);
    }

    // Exit probabilities sum to one on every topology.
    {
        SuiteResult norm{"probability normalization", 0, 0, 0.0, 1e-12};
        for (std::size_t k = 0; k < opts.draws; ++k) {
            const double sigma = uniform(rng, 0.0, 0.99);
            const double rho = uniform(rng, 0.0, 0.99);
            const double d1 = uniform(rng, 0.0, two_pi);
            const double d2 = uniform(rng, 0.0, two_pi);
            const double s = uniform(rng, 0.0, 1.0);
            const auto f = solve_network(template_ring_backscatter(sigma, rho, d1, d2, s), asm_opts).enhancement;
            const double l = std::norm(f.at("L"));
            const double r = std::norm(f.at("R"));
            norm.record(std::abs(l / (l + r) + r / (l + r) - 1.0));

            const auto pr = analytic::backscatter_port_probs_resonant(sigma, rho, uniform(rng, 0.0, two_pi));
            norm.record(std::abs(pr.first + pr.second - 1.0));

            analytic::SagnacParams p;
            p.sigma_ms = sigma;
            p.sigma_ma = uniform(rng, 0.0, 0.99);
            for (auto& d : p.arc_phases) d = uniform(rng, 0.0, two_pi);
            p.dipole_phase = uniform(rng, 0.0, two_pi);
            const auto sp = analytic::sagnac_port_probs(p);
            norm.record(std::abs(sp.first + sp.second - 1.0));
        }
        report.suites.push_back(norm);
    }
    return report;
}

inline void print_report(std::ostream& os, const SelfcheckReport& r) {
    char line[200];
    for (const auto& s : r.suites) {
        std::snprintf(line, sizeof line, "%-30s cases %6zu  failures %4zu  worst %.3e  tol %.1e  %s\n", s.name.c_str(),
                      s.cases, s.failures, s.worst, s.tolerance, s.passed() ? "PASS" : "FAIL");
        os << line;
    }
    os << (r.passed() ? "selfcheck: all suites passed\n" : "selfcheck: FAILED\n");
}

}  // namespace asymfield
