#pragma once

// Asymptotic-in field solver. For an excitation of the external ports, every
// directed link amplitude is an unknown and every link contributes the one
// equation of the element (or port) that drives it, so the system is square.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "asymfield/circuit.hpp"
#include "asymfield/enhancement.hpp"
#include "asymfield/errors.hpp"

namespace asymfield {

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const { return n_; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    std::vector<cplx> multiply(std::span<const cplx> x) const {
        std::vector<cplx> y(n_);
        for (std::size_t r = 0; r < n_; ++r) {
            cplx acc{};
            for (std::size_t c = 0; c < n_; ++c) acc += (*this)(r, c) * x[c];
            y[r] = acc;
        }
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<cplx> data_;
};

inline double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

/// Relative pivot magnitude below which the system is declared singular.
inline constexpr double kPivotThreshold = 1e-12;
/// Maximum accepted relative residual ||Ax - b|| / ||b||.
inline constexpr double kResidualThreshold = 1e-10;

/// LU factorisation with partial pivoting. Pivot search scans rows in link
/// order and keeps the first maximum, so results are reproducible bit for bit.
class LuFactorization {
public:
    explicit LuFactorization(const ComplexMatrix& a) : lu_(a), perm_(a.size()) {
        const std::size_t n = a.size();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        const double scale = std::max(a.max_abs(), 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t r = k + 1; r < n; ++r) {
                const double m = std::abs(lu_(r, k));
                if (m > best) {
                    best = m;
                    p = r;
                }
            }
            if (best < kPivotThreshold * scale) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "singular system: pivot magnitude %.3g below threshold "
                              "(|1 - sigma e^{i delta}| vanishes; |sigma| = 1 or |rho| = 1 at resonance)",
                              best);
                throw SingularError(buf, best);
            }
            if (p != k) {
                for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
                std::swap(perm_[k], perm_[p]);
            }
            const cplx pivot = lu_(k, k);
            for (std::size_t r = k + 1; r < n; ++r) {
                const cplx factor = lu_(r, k) / pivot;
                lu_(r, k) = factor;
                if (factor == cplx{}) continue;
                for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= factor * lu_(k, c);
            }
        }
    }

    std::vector<cplx> solve(std::span<const cplx> b) const {
        const std::size_t n = lu_.size();
        std::vector<cplx> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        }
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
            x[i] /= lu_(i, i);
        }
        return x;
    }

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Fault injection for self-tests: flips the sign of i*kappa on the backward
/// coupler rows, which breaks reciprocity.
struct AssemblyOptions {
    bool flip_backward_coupler_sign = false;
};

struct LinearSystem {
    ComplexMatrix matrix;
    std::vector<cplx> rhs;
    std::vector<LinkId> links;
    std::unordered_map<LinkId, std::size_t> index;

    std::size_t size() const { return links.size(); }
    std::size_t index_of(const LinkId& l) const { return index.at(l); }
};

namespace detail {

inline LinearSystem assemble_matrix(const Circuit& circuit, const AssemblyOptions& opts) {
    LinearSystem sys;
    sys.links = circuit.links();
    for (std::size_t i = 0; i < sys.links.size(); ++i) sys.index.emplace(sys.links[i], i);
    sys.matrix = ComplexMatrix(sys.links.size());
    sys.rhs.assign(sys.links.size(), cplx{});

    auto& m = sys.matrix;
    auto at = [&](const LinkId& l) { return sys.index.at(l); };
    const cplx i1{0.0, 1.0};

    for (const auto& e : circuit.elements) {
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, Coupler>) {
                    const double s = el.sigma;
                    const cplx ik = i1 * el.kappa();
                    // out_a = s in_a + ik in_b ; out_b = ik in_a + s in_b
                    const auto ra = at(el.fwd_out[0]);
                    const auto rb = at(el.fwd_out[1]);
                    m(ra, ra) -= 1.0;
                    m(ra, at(el.fwd_in[0])) += s;
                    m(ra, at(el.fwd_in[1])) += ik;
                    m(rb, rb) -= 1.0;
                    m(rb, at(el.fwd_in[0])) += ik;
                    m(rb, at(el.fwd_in[1])) += s;
                    // Backward rows keep the inputs-in-terms-of-outputs form:
                    // in_a = s out_a - ik out_b ; in_b = -ik out_a + s out_b.
                    // The matrix [[s,-ik],[-ik,s]] is the inverse of the forward
                    // one, so this is the same reciprocal coupler.
                    const cplx mik = opts.flip_backward_coupler_sign ? ik : -ik;
                    const auto qa = at(el.bwd_out[0]);
                    const auto qb = at(el.bwd_out[1]);
                    m(qa, at(el.bwd_in[0])) -= 1.0;
                    m(qa, qa) += s;
                    m(qa, qb) += mik;
                    m(qb, at(el.bwd_in[1])) -= 1.0;
                    m(qb, qa) += mik;
                    m(qb, qb) += s;
                } else if constexpr (std::is_same_v<T, Segment>) {
                    const cplx prop = el.atten * std::exp(i1 * el.phase);
                    const auto rf = at(el.fwd_out);
                    const auto rb = at(el.bwd_out);
                    m(rf, rf) -= 1.0;
                    m(rf, at(el.fwd_in)) += prop;
                    m(rb, rb) -= 1.0;
                    m(rb, at(el.bwd_in)) += prop;
                } else {
                    const double t = el.tau();
                    const cplx ir = i1 * el.rho;
                    const auto rc = at(el.ccw_out);
                    const auto rw = at(el.cw_out);
                    m(rc, rc) -= 1.0;
                    m(rc, at(el.ccw_in)) += t;
                    m(rc, at(el.cw_in)) += ir;
                    m(rw, rw) -= 1.0;
                    m(rw, at(el.ccw_in)) += ir;
                    m(rw, at(el.cw_in)) += t;
                }
            },
            e);
    }
    for (const auto& p : circuit.ports) {
        const auto r = at(p.in);
        m(r, r) = 1.0;
    }
    return sys;
}

}  // namespace detail

/// Assembles the system for arbitrary complex input amplitudes, one per port
/// in port order.
inline LinearSystem assemble(const Circuit& circuit, std::span<const cplx> port_inputs,
                             const AssemblyOptions& opts = {}) {
    require_valid(circuit);
    if (port_inputs.size() != circuit.ports.size()) {
        throw ValidationError("expected " + std::to_string(circuit.ports.size()) + " port inputs");
    }
    auto sys = detail::assemble_matrix(circuit, opts);
    for (std::size_t j = 0; j < circuit.ports.size(); ++j) {
        sys.rhs[sys.index_of(circuit.ports[j].in)] = port_inputs[j];
    }
    return sys;
}

/// Asymptotic-in excitation: unit amplitude into one port, nothing elsewhere.
inline LinearSystem assemble(const Circuit& circuit, std::string_view excited_port,
                             const AssemblyOptions& opts = {}) {
    std::vector<cplx> inputs(circuit.ports.size());
    bool found = false;
    for (std::size_t j = 0; j < circuit.ports.size(); ++j) {
        if (circuit.ports[j].label == excited_port) {
            inputs[j] = 1.0;
            found = true;
        }
    }
    if (!found) throw ValidationError("unknown port " + std::string(excited_port));
    return assemble(circuit, inputs, opts);
}

struct Solution {
    std::vector<LinkId> links;
    std::vector<cplx> amplitudes;
    double relative_residual = 0.0;

    cplx amplitude(const LinkId& l) const {
        const auto it = std::find(links.begin(), links.end(), l);
        if (it == links.end()) throw std::out_of_range("unknown link " + l.name);
        return amplitudes[static_cast<std::size_t>(it - links.begin())];
    }
};

namespace detail {

inline Solution finish_solution(const LinearSystem& sys, std::vector<cplx> x) {
    Solution sol;
    sol.links = sys.links;
    const auto ax = sys.matrix.multiply(x);
    std::vector<cplx> r(ax.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = ax[i] - sys.rhs[i];
    const double bnorm = norm2(sys.rhs);
    sol.relative_residual = norm2(r) / (bnorm > 0.0 ? bnorm : 1.0);
    if (!(sol.relative_residual <= kResidualThreshold)) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "singular system: relative residual %.3g exceeds %.0e",
                      sol.relative_residual, kResidualThreshold);
        throw SingularError(buf, sol.relative_residual);
    }
    sol.amplitudes = std::move(x);
    return sol;
}

}  // namespace detail

/// Solves the assembled system. Throws SingularError on a vanishing pivot or
/// when the relative residual exceeds 1e-10.
inline Solution solve(const LinearSystem& sys) {
    const LuFactorization lu(sys.matrix);
    return detail::finish_solution(sys, lu.solve(sys.rhs));
}

/// f_j = (forward amplitude entering the host segment) e^{i phase_ccw}
///     + (backward amplitude entering the host segment) e^{i phase_cw},
/// one entry per port, from the solutions listed in port order.
inline FieldEnhancement probe_enhancement(const Circuit& circuit, std::span<const Solution> per_port) {
    if (!circuit.probe) throw ValidationError("no dipole probe");
    const Segment* host = circuit.find_segment(circuit.probe->segment);
    if (host == nullptr) throw ValidationError("probe host segment " + circuit.probe->segment + " not found");
    if (per_port.size() != circuit.ports.size()) throw ValidationError("need one solution per port");

    const double s = circuit.probe->offset;
    const auto split = probe_split(*host, s);
    const cplx i1{0.0, 1.0};
    const cplx ccw = std::pow(host->atten, s) * std::exp(i1 * split.ccw_phase);
    const cplx cw = std::pow(host->atten, 1.0 - s) * std::exp(i1 * split.cw_phase);

    FieldEnhancement f;
    for (std::size_t j = 0; j < circuit.ports.size(); ++j) {
        const auto& sol = per_port[j];
        f.ports.push_back({circuit.ports[j].label, sol.amplitude(host->fwd_in) * ccw + sol.amplitude(host->bwd_in) * cw});
    }
    return f;
}

/// S[out][in] over the external ports, in port order.
struct SMatrix {
    std::vector<std::string> labels;
    ComplexMatrix values;

    const cplx& operator()(std::size_t out, std::size_t in) const { return values(out, in); }
    std::size_t size() const { return labels.size(); }
};

/// Everything the solver produces for one circuit: per-port solutions, the
/// dipole enhancements and the S-matrix. The matrix is factored once.
struct NetworkResponse {
    std::vector<Solution> solutions;
    FieldEnhancement enhancement;
    SMatrix smatrix;
};

inline NetworkResponse solve_network(const Circuit& circuit, const AssemblyOptions& opts = {}) {
    require_valid(circuit);
    auto sys = detail::assemble_matrix(circuit, opts);
    const LuFactorization lu(sys.matrix);

    NetworkResponse resp;
    const std::size_t np = circuit.ports.size();
    resp.smatrix.values = ComplexMatrix(np);
    for (std::size_t j = 0; j < np; ++j) {
        std::fill(sys.rhs.begin(), sys.rhs.end(), cplx{});
        sys.rhs[sys.index_of(circuit.ports[j].in)] = 1.0;
        resp.solutions.push_back(detail::finish_solution(sys, lu.solve(sys.rhs)));
        const auto& x = resp.solutions.back().amplitudes;
        for (std::size_t i = 0; i < np; ++i) resp.smatrix.values(i, j) = x[sys.index_of(circuit.ports[i].out)];
    }
    for (const auto& p : circuit.ports) resp.smatrix.labels.push_back(p.label);
    if (circuit.probe) resp.enhancement = probe_enhancement(circuit, resp.solutions);
    return resp;
}

/// Column j holds the port outputs under unit excitation of port j.
inline SMatrix scattering_matrix(const Circuit& circuit, const AssemblyOptions& opts = {}) {
    return solve_network(circuit, opts).smatrix;
}

}  // namespace asymfield
