#pragma once

// Closed-form asymptotic-in field enhancements and rate ratios for the four
// reference structures: bare waveguide, point-coupled ring, ring with a
// lumped backscatterer, and the Sagnac / main ring / auxiliary ring device.
// All expressions are lossless.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "asymfield/enhancement.hpp"
#include "asymfield/errors.hpp"

namespace asymfield::analytic {

/// Denominators smaller than this are treated as a resonance pole.
inline constexpr double kDivergenceThreshold = 1e-12;

namespace detail {
inline cplx expi(double phase) { return std::polar(1.0, phase); }

inline void guard(const cplx& denominator, const char* what) {
    const double mag = std::abs(denominator);
    if (!(mag >= kDivergenceThreshold)) {
        throw SingularError(std::string("singular system: ") + what + " below threshold", mag);
    }
}

inline void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " out of range");
}

inline double complement(double v) { return std::sqrt(std::max(0.0, 1.0 - v * v)); }
}  // namespace detail

struct EnhancementPair {
    cplx first;   // L, or port 1
    cplx second;  // R, or port 2
};

// ---------------------------------------------------------------------------
// Ring resonator

struct RingParams {
    double sigma = 0.0;
    double round_trip_phase = 0.0;  // delta0 = k0 l
    double dipole_phase = 0.0;      // k0 zeta0, counter-clockwise from the coupler

    double kappa() const { return detail::complement(sigma); }
};

inline EnhancementPair ring_enhancements(const RingParams& p) {
    detail::check_unit(p.sigma, "sigma");
    const cplx den = 1.0 - p.sigma * detail::expi(p.round_trip_phase);
    detail::guard(den, "|1 - sigma e^{i delta}|");
    const cplx amp = cplx{0.0, p.kappa()} / den;
    return {amp * detail::expi(p.dipole_phase), amp * detail::expi(p.round_trip_phase - p.dipole_phase)};
}

/// Gamma_ring / Gamma_wg = kappa^2 / (1 + sigma^2 - 2 sigma cos delta0).
inline double ring_rate_ratio(const RingParams& p) {
    detail::check_unit(p.sigma, "sigma");
    const double den = 1.0 + p.sigma * p.sigma - 2.0 * p.sigma * std::cos(p.round_trip_phase);
    detail::guard(den, "|1 - sigma e^{i delta}|");
    const double k = p.kappa();
    return k * k / den;
}

/// Resonant high-finesse approximation 2 / (1 - sigma).
inline double ring_rate_ratio_highfinesse(double sigma) {
    detail::check_unit(sigma, "sigma");
    detail::guard(1.0 - sigma, "1 - sigma");
    return 2.0 / (1.0 - sigma);
}

// ---------------------------------------------------------------------------
// Ring with one lumped scatterer. Arc 1 runs counter-clockwise from the
// coupler to the scatterer, arc 2 from the scatterer back to the coupler.

struct BackscatterParams {
    double sigma = 0.0;
    double rho = 0.0;
    double arc1_phase = 0.0;    // delta1
    double arc2_phase = 0.0;    // delta2
    double dipole_phase = 0.0;  // k0 zeta0 from the coupler

    double kappa() const { return detail::complement(sigma); }
    double tau() const { return detail::complement(rho); }
    double round_trip_phase() const { return arc1_phase + arc2_phase; }
    /// Delta: dipole-scatterer phase mismatch.
    double mismatch() const { return dipole_phase - arc1_phase; }
};

inline EnhancementPair backscatter_enhancements(const BackscatterParams& p) {
    using detail::expi;
    detail::check_unit(p.sigma, "sigma");
    detail::check_unit(p.rho, "rho");
    const double s = p.sigma;
    const double k = p.kappa();
    const double t = p.tau();
    const double d = p.round_trip_phase();
    const double dt = p.dipole_phase;
    const cplx i1{0.0, 1.0};

    const cplx den = 1.0 - 2.0 * t * s * expi(d) + s * s * expi(2.0 * d);
    detail::guard(den, "|rho^2 + (tau - sigma e^{i delta})^2|");
    const cplx left = (i1 * k * (t - s * expi(d)) * expi(dt) -
                       p.rho * k * s * expi(2.0 * p.arc1_phase) * expi(d - dt)) /
                      den;
    const cplx right = (i1 * k * (1.0 - t * s * expi(d)) * expi(d - dt) -
                        p.rho * k * expi(p.arc2_phase) * expi(dt - p.arc1_phase)) /
                       den;
    return {left, right};
}

struct BackscatterRates {
    double total = 0.0;  // Gamma_rb / Gamma_wg
    double left = 0.0;   // Gamma_rb,L / Gamma_wg
    double right = 0.0;  // Gamma_rb,R / Gamma_wg
};

/// Rate ratios written directly in sigma, rho and Delta (no enhancements).
inline BackscatterRates backscatter_rates(const BackscatterParams& p) {
    using detail::expi;
    detail::check_unit(p.sigma, "sigma");
    detail::check_unit(p.rho, "rho");
    const double s = p.sigma;
    const double k2 = 1.0 - s * s;
    const double t = p.tau();
    const cplx e = expi(p.round_trip_phase());
    const cplx i1{0.0, 1.0};

    const cplx pole = p.rho * p.rho + (t - s * e) * (t - s * e);
    detail::guard(pole, "|rho^2 + (tau - sigma e^{i delta})^2|");
    const double den = std::norm(pole);
    const cplx w = 1.0 - i1 * p.rho * expi(-2.0 * p.mismatch());

    BackscatterRates r;
    r.total = 0.5 * k2 * 2.0 * ((1.0 + s * s - 2.0 * t * s * e) * w).real() / den;
    r.left = (2.0 * (k2 * (s * s - t * s * e) * w).real() + k2 * k2 * t * t) / (2.0 * den);
    r.right = (2.0 * (k2 * (1.0 - t * s * e) * w).real() - k2 * k2 * t * t) / (2.0 * den);
    return r;
}

/// Resonant (delta0 = 2 m pi) form: kappa^2 (1 - rho sin 2 Delta) / (rho^2 + (tau - sigma)^2).
inline double backscatter_rate_resonant(double sigma, double rho, double mismatch) {
    detail::check_unit(sigma, "sigma");
    detail::check_unit(rho, "rho");
    const double t = detail::complement(rho);
    const double den = rho * rho + (t - sigma) * (t - sigma);
    detail::guard(den, "rho^2 + (tau - sigma)^2");
    return (1.0 - sigma * sigma) * (1.0 - rho * std::sin(2.0 * mismatch)) / den;
}

struct PortProbabilities {
    double first = 0.0;
    double second = 0.0;
};

/// Resonant exit probabilities (P_L, P_R) of a photon emitted in the ring.
inline PortProbabilities backscatter_port_probs_resonant(double sigma, double rho, double mismatch) {
    detail::check_unit(sigma, "sigma");
    detail::check_unit(rho, "rho");
    const double t = detail::complement(rho);
    const double k2 = 1.0 - sigma * sigma;
    const double w = 1.0 - rho * std::sin(2.0 * mismatch);
    const double den = 2.0 * w * (rho * rho + (t - sigma) * (t - sigma));
    detail::guard(den, "(1 - rho sin 2 Delta)(rho^2 + (tau - sigma)^2)");
    return {(2.0 * sigma * (sigma - t) * w + k2 * t * t) / den, (2.0 * (1.0 - t * sigma) * w - k2 * t * t) / den};
}

// ---------------------------------------------------------------------------
// Sagnac interferometer (splitter sigma_s) coupled to a main ring (sigma_ms)
// which is coupled to an auxiliary ring (sigma_ma). Arc phases:
//   delta1, delta2  Sagnac arms, splitter -> main-ring coupler
//   delta3          main ring, Sagnac coupler -> aux coupler
//   delta4          auxiliary ring round trip
//   delta5          main ring, aux coupler -> Sagnac coupler

struct SagnacParams {
    double sigma_s = std::numbers::sqrt2 / 2.0;
    double sigma_ms = 0.0;
    double sigma_ma = 0.0;
    std::array<double, 5> arc_phases{};
    double dipole_phase = 0.0;  // k0 zeta0, counter-clockwise from the Sagnac coupler

    double kappa_s() const { return detail::complement(sigma_s); }
    double kappa_ms() const { return detail::complement(sigma_ms); }
    double kappa_ma() const { return detail::complement(sigma_ma); }
    double main_phase() const { return arc_phases[2] + arc_phases[4]; }
    double aux_phase() const { return arc_phases[3]; }
    double sagnac_phase() const { return arc_phases[0] + arc_phases[1]; }
    /// Dipole phase that steers the output port. Equals 2 k0 (zeta0 + l1) when
    /// the main ring is resonant (delta_m = 2 m pi).
    double routing_phase() const { return 2.0 * (dipole_phase + arc_phases[0]) - main_phase(); }
};

/// C = (1 - sigma_ma e^{-i delta_a}) / (1 - sigma_ma e^{i delta_a}); |C| = 1.
inline cplx aux_ring_factor(double sigma_ma, double aux_phase) {
    detail::check_unit(sigma_ma, "sigma_ma");
    const cplx den = 1.0 - sigma_ma * detail::expi(aux_phase);
    detail::guard(den, "|1 - sigma_ma e^{i delta_a}|");
    return (1.0 - sigma_ma * detail::expi(-aux_phase)) / den;
}

inline EnhancementPair sagnac_enhancements(const SagnacParams& p) {
    using detail::expi;
    detail::check_unit(p.sigma_s, "sigma_s");
    detail::check_unit(p.sigma_ms, "sigma_ms");
    detail::check_unit(p.sigma_ma, "sigma_ma");
    const auto& d = p.arc_phases;
    const double dt = p.dipole_phase;
    const double ss = p.sigma_s;
    const double ks = p.kappa_s();
    const double kms = p.kappa_ms();
    const cplx i1{0.0, 1.0};

    const cplx aux_minus = 1.0 - p.sigma_ma * expi(-d[3]);
    const cplx aux_plus = 1.0 - p.sigma_ma * expi(d[3]);
    const cplx den = aux_plus + p.sigma_ms * expi(d[2] + d[3] + d[4]) * aux_minus;
    detail::guard(den, "|1 + sigma_ms C e^{i(delta_a + delta_m)}|");

    // Counter-clockwise and clockwise contributions at the dipole.
    const cplx ccw = kms * expi(d[0] + d[2] + d[3]) * aux_minus * expi(dt - d[2]) / den;
    const cplx cw = kms * expi(d[1]) * aux_plus * expi(p.main_phase() - dt) / den;
    return {-(i1 * ss * ccw + ks * cw), ks * ccw + i1 * ss * cw};
}

/// Gamma_T / Gamma_wg = kappa_ms^2 / |1 + sigma_ms C e^{i(delta_a + delta_m)}|^2.
/// Independent of sigma_s, the dipole position and the Sagnac phase.
inline double sagnac_total_rate(const SagnacParams& p) {
    detail::check_unit(p.sigma_ms, "sigma_ms");
    const cplx c = aux_ring_factor(p.sigma_ma, p.aux_phase());
    const cplx loop = c * detail::expi(p.aux_phase() + p.main_phase());
    const double den = 1.0 + p.sigma_ms * p.sigma_ms + p.sigma_ms * 2.0 * loop.real();
    detail::guard(den, "|1 + sigma_ms C e^{i(delta_a + delta_m)}|");
    const double k = p.kappa_ms();
    return k * k / den;
}

/// Exit probabilities (P_1, P_2) behind a 50:50 splitter:
/// P_j = [1 - (i^{2j+1}/2)(C e^{i(delta_a - delta_s + routing)} - c.c.)] / 2.
inline PortProbabilities sagnac_port_probs(const SagnacParams& p) {
    if (std::abs(p.sigma_s - std::numbers::sqrt2 / 2.0) > 1e-12) {
        throw ValidationError("sagnac_port_probs requires a 50:50 splitter; use sagnac_enhancements");
    }
    const cplx c = aux_ring_factor(p.sigma_ma, p.aux_phase());
    const double im = (c * detail::expi(p.aux_phase() - p.sagnac_phase() + p.routing_phase())).imag();
    return {0.5 * (1.0 - im), 0.5 * (1.0 + im)};
}

// ---------------------------------------------------------------------------
// Straight waveguide: unit-amplitude plane waves from the left and the right.

inline EnhancementPair waveguide_enhancements(double phase_from_left, double phase_from_right) {
    return {detail::expi(phase_from_left), detail::expi(phase_from_right)};
}

}  // namespace asymfield::analytic
