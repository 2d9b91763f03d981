#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asymfield {

using cplx = std::complex<double>;

/// Dimensionless field at the dipole for the asymptotic-in field of one
/// external port, relative to the bare-waveguide mode. The 1/sqrt(2 pi) and
/// transverse-profile factors are not included.
struct PortEnhancement {
    std::string port;
    cplx value;
};

struct FieldEnhancement {
    std::vector<PortEnhancement> ports;

    const cplx& at(std::string_view label) const {
        for (const auto& p : ports) {
            if (p.port == label) return p.value;
        }
        throw std::out_of_range("no enhancement for port " + std::string(label));
    }

    /// Sum over ports of |f_j|^2.
    double intensity_sum() const {
        double s = 0.0;
        for (const auto& p : ports) s += std::norm(p.value);
        return s;
    }
};

}  // namespace asymfield
