#include "chirpmem_cli/materials.hpp"

#include "chirpmem_cli/config.hpp"

#include <chirpmem/types.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chirpmem::cli {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<MaterialPreset> make_presets()
{
    std::vector<MaterialPreset> out;

    // 153Eu:YSO, |1> = |+-3/2g>, |3> = |+-1/2g>, |2> = |+-5/2e>
    MaterialPreset eu153;
    eu153.name = "eu153_yso";
    eu153.omega_r = two_pi * 90.0;
    eu153.dipole_ratio = 2.0;
    eu153.unwanted = {two_pi * 119.0, -eu153.omega_r - two_pi * 51.0};
    eu153.sweep_lo = -two_pi * 130.0;
    eu153.sweep_hi = two_pi * 40.0;
    eu153.tau_p = 0.1;
    out.push_back(eu153);

    // 151Eu:YSO, every other line sits above omega_12
    MaterialPreset eu151;
    eu151.name = "eu151_yso";
    eu151.omega_r = two_pi * 34.5;
    eu151.dipole_ratio = 1.0;
    eu151.unwanted = {two_pi * 46.2};
    eu151.sweep_lo = -two_pi * 57.5;
    eu151.sweep_hi = two_pi * 23.0;
    eu151.tau_p = 0.3;
    out.push_back(eu151);
    return out;
}

const std::vector<MaterialPreset>& presets()
{
    static const std::vector<MaterialPreset> all = make_presets();
    return all;
}

}  // namespace

const MaterialPreset& material_preset(const std::string& name)
{
    for (const auto& p : presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw ConfigError("material.preset: unknown material '" + name + "'");
}

std::vector<std::string> material_preset_names()
{
    std::vector<std::string> names;
    for (const auto& p : presets()) {
        names.push_back(p.name);
    }
    return names;
}

bool is_material_preset(const std::string& name)
{
    const auto names = material_preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ChirpedPulse suggested_pulse(const MaterialPreset& preset)
{
    const double half_range = 0.5 * (preset.sweep_hi - preset.sweep_lo);
    const double center = 0.5 * (preset.sweep_hi + preset.sweep_lo);
    return ChirpedPulse::make(0.5 * half_range, preset.tau_p, center, -half_range * preset.tau_p);
}

MaterialReport validate_material(const MaterialPreset& preset, const ChirpedPulse& pulse)
{
    MaterialReport r{};
    const double range = std::abs(pulse.chirp_range());
    r.sweep_lo = pulse.center_detuning - range;
    r.sweep_hi = pulse.center_detuning + range;
    r.sweep_clear = true;
    double best = INFINITY;
    r.nearest_unwanted = NAN;
    for (double u : preset.unwanted) {
        const double clearance = std::max(r.sweep_lo - u, u - r.sweep_hi);
        r.lines.push_back({u, clearance});
        r.sweep_clear = r.sweep_clear && clearance > 0.0;
        if (clearance < best) {
            best = clearance;
            r.nearest_unwanted = u;
        }
    }
    r.crossing_window = rephasable_window(pulse, preset.omega_r);
    const double margin = 2.0 * std::numbers::pi / pulse.duration;
    r.rephasable = {r.crossing_window.lo + margin, r.crossing_window.hi - margin};
    if (r.crossing_window.empty() || r.rephasable.empty()) {
        r.rephasable = {0.0, 0.0};
    }
    if (r.crossing_window.empty()) {
        r.crossing_window = {0.0, 0.0};
    }
    return r;
}

}  // namespace chirpmem::cli
