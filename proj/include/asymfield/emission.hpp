#pragma once

// Golden-rule conversion from field enhancements to emission rates.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "asymfield/enhancement.hpp"
#include "asymfield/errors.hpp"

namespace asymfield {

namespace constants {
// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F / m
inline constexpr double c = 299792458.0;              // m / s
}  // namespace constants

/// Scalar data of the guided mode at the dipole position.
struct ModeContext {
    double lambda0 = 630e-9;       // vacuum wavelength, m
    double n = 2.0;                // refractive index at the dipole
    double ng = 2.0;               // group index
    double aeff = 9.9225e-14;      // effective area at the dipole, m^2
    std::optional<double> length;  // resonator length, m

    double omega0() const { return 2.0 * std::numbers::pi * constants::c / lambda0; }
    double group_velocity() const { return constants::c / ng; }
    double k0() const { return omega0() * n / constants::c; }

    void check() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(lambda0)) throw ValidationError("mode lambda0 must be positive");
        if (!positive(n)) throw ValidationError("mode n must be positive");
        if (!positive(ng)) throw ValidationError("mode ng must be positive");
        if (!positive(aeff)) throw ValidationError("mode aeff must be positive");
        if (length && !positive(*length)) throw ValidationError("mode length must be positive");
    }

    friend bool operator==(const ModeContext&, const ModeContext&) = default;
};

struct DipoleSpec {
    double moment = 1e-29;   // |p|, C m
    int occupation = 0;      // photons already in the emission channel
    double alignment = 1.0;  // cos^2 of the angle between p and the mode field

    void check() const {
        if (!(std::isfinite(moment) && moment > 0.0)) throw ValidationError("dipole p must be positive");
        if (occupation < 0) throw ValidationError("dipole nocc must be >= 0");
        if (!(alignment >= 0.0 && alignment <= 1.0)) throw ValidationError("dipole align must be in [0,1]");
    }

    friend bool operator==(const DipoleSpec&, const DipoleSpec&) = default;
};

/// Emission rate into the two guided modes of a straight waveguide,
/// including stimulated enhancement (n_occ + 1).
inline double gamma_wg(const ModeContext& mode, const DipoleSpec& dipole) {
    const double p2 = dipole.moment * dipole.moment * dipole.alignment;
    return p2 * mode.omega0() /
           (constants::epsilon0 * mode.n * mode.n * constants::hbar * mode.group_velocity() * mode.aeff) *
           (dipole.occupation + 1);
}

/// Vacuum rate of a randomly oriented dipole.
inline double gamma_free(const ModeContext& mode, const DipoleSpec& dipole) {
    const double w = mode.omega0();
    const double c = constants::c;
    return dipole.moment * dipole.moment * w * w * w /
           (3.0 * constants::epsilon0 * constants::hbar * std::numbers::pi * c * c * c);
}

/// Gamma_wg / (n Gamma_0) for an aligned dipole with no initial photons.
inline double purcell_wg_ratio(const ModeContext& mode) {
    const double reduced = mode.lambda0 / mode.n;
    return 3.0 / (4.0 * std::numbers::pi) * (mode.ng / mode.n) * reduced * reduced / mode.aeff;
}

struct PortRate {
    std::string port;
    double rate = 0.0;         // s^-1
    double probability = 0.0;  // NaN when the total rate vanishes
};

struct RateReport {
    double gamma_wg = 0.0;
    double gamma_free = 0.0;
    double gamma_total = 0.0;
    std::vector<PortRate> ports;
    bool probabilities_defined = true;  // false when the dipole is fully suppressed

    double total_ratio() const { return gamma_total / gamma_wg; }
};

inline constexpr double kZeroRateThreshold = 1e-300;

/// Gamma_j = (Gamma_wg / 2) |f_j|^2. The 1/2 makes the bare waveguide, with
/// |f_L| = |f_R| = 1, return Gamma_total = Gamma_wg.
inline RateReport rates_from_enhancements(const FieldEnhancement& f, const ModeContext& mode,
                                          const DipoleSpec& dipole) {
    RateReport report;
    report.gamma_wg = gamma_wg(mode, dipole);
    report.gamma_free = gamma_free(mode, dipole);
    for (const auto& pe : f.ports) {
        const double rate = 0.5 * report.gamma_wg * std::norm(pe.value);
        report.ports.push_back({pe.port, rate, 0.0});
        report.gamma_total += rate;
    }
    report.probabilities_defined = report.gamma_total >= kZeroRateThreshold;
    for (auto& pr : report.ports) {
        pr.probability = report.probabilities_defined ? pr.rate / report.gamma_total
                                                      : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

/// A high-finesse estimate together with a flag set when sigma < 0.9, below
/// which the Lorentzian approximation is not meaningful.
struct HighFinesseEstimate {
    double value = 0.0;
    bool outside_validity = false;
};

inline constexpr double kHighFinesseSigma = 0.9;

/// Q from 2 / (1 - sigma) = 4 v_g Q / (omega0 l).
inline HighFinesseEstimate q_from_sigma(double sigma, const ModeContext& mode) {
    if (!mode.length) throw ValidationError("q_from_sigma needs the resonator length");
    if (!(sigma >= 0.0 && sigma < 1.0)) throw ValidationError("sigma out of range");
    const double q = mode.omega0() * *mode.length / (2.0 * mode.group_velocity() * (1.0 - sigma));
    return {q, sigma < kHighFinesseSigma};
}

/// Cavity Purcell form Gamma_ring / (n Gamma_0) = 2 (3 / 4 pi^2) (lambda0/n)^3 Q / V_eff
/// with V_eff = A_eff l.
inline HighFinesseEstimate purcell_highfinesse(double sigma, const ModeContext& mode) {
    const auto q = q_from_sigma(sigma, mode);
    const double reduced = mode.lambda0 / mode.n;
    const double veff = mode.aeff * *mode.length;
    const double pi = std::numbers::pi;
    return {2.0 * 3.0 / (4.0 * pi * pi) * reduced * reduced * reduced * q.value / veff, q.outside_validity};
}

}  // namespace asymfield
