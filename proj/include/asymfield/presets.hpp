#pragma once

// Read-only sweep presets for the four published figures.

#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "asymfield/model.hpp"
#include "asymfield/sweep.hpp"

namespace asymfield {

struct FigurePreset {
    std::string_view id;
    std::string_view summary;
    Topology topology;
    ParamMap fixed;
    SweepGrid grid;
};

inline const std::vector<FigurePreset>& figure_presets() {
    constexpr double pi = std::numbers::pi;
    static const std::vector<FigurePreset> presets{
        {"fig3",
         "backscatter ring on resonance: rate vs dipole-scatterer mismatch and reflectivity",
         Topology::backscatter,
         {{"sigma", 0.98}, {"delta1", 0.0}, {"delta2", 2.0 * pi}},
         {{{"Delta", 0.0, 2.0 * pi, 512, false}, {"rho", 1e-4, 0.5, 256, true}}, {}}},
        {"fig4",
         "backscatter ring on resonance, rho = 0.017: rate and port probabilities vs mismatch",
         Topology::backscatter,
         {{"sigma", 0.98}, {"rho", 0.017}, {"delta1", 0.0}, {"delta2", 2.0 * pi}},
         {{{"Delta", 0.0, 2.0 * pi, 513, false}}, {}}},
        {"fig5",
         "Sagnac device: port probabilities and rate vs Sagnac phase",
         Topology::sagnac,
         {{"sigma_s", std::numbers::sqrt2 / 2.0},
          {"sigma_ms", 0.98},
          {"sigma_ma", 0.7},
          {"delta_m", 2.0 * pi},
          {"delta_a", 2.0 * pi},
          {"dtilde0", pi / 2.0}},
         {{{"delta_s", 0.0, 2.0 * pi, 513, false}}, {}}},
        {"fig6",
         "Sagnac device at delta_s = 3pi/4 and 5pi/4: rate and port probabilities vs auxiliary ring phase",
         Topology::sagnac,
         {{"sigma_s", std::numbers::sqrt2 / 2.0},
          {"sigma_ms", 0.98},
          {"sigma_ma", 0.7},
          {"delta_m", 2.0 * pi},
          {"dtilde0", pi / 2.0}},
         {{{"delta_s", 0.75 * pi, 1.25 * pi, 2, false}, {"delta_a", 0.0, 2.0 * pi, 513, false}}, {}}},
    };
    return presets;
}

inline const FigurePreset* find_preset(std::string_view id) {
    for (const auto& p : figure_presets()) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

}  // namespace asymfield
