#pragma once

#include <chirpmem/pulses.hpp>

#include <string>
#include <vector>

namespace chirpmem::cli {

/// Lambda system carved out of a real hyperfine structure.  Frequencies are
/// angular (rad/us), with the 2 pi already folded in; offsets are measured
/// from omega_12 of the line-center atom, i.e. in the same frame as the pulse
/// detuning.
struct MaterialPreset {
    std::string name;
    double omega_r = 0.0;
    double dipole_ratio = 1.0;
    std::vector<double> unwanted;  // nearest other optical resonances
    double sweep_lo = 0.0;         // suggested chirp, lowest detuning
    double sweep_hi = 0.0;
    double tau_p = 1.0;            // suggested pulse length [us]
};

const MaterialPreset& material_preset(const std::string& name);
std::vector<std::string> material_preset_names();
bool is_material_preset(const std::string& name);

/// Negative-chirp sech/tanh pulse whose asymptotic sweep is
/// [sweep_lo, sweep_hi], with A0 = half the sweep range.
ChirpedPulse suggested_pulse(const MaterialPreset& preset);

struct UnwantedLine {
    double offset;
    /// Distance from the sweep; negative when the sweep runs over the line.
    double clearance;
};

struct MaterialReport {
    double sweep_lo;
    double sweep_hi;
    std::vector<UnwantedLine> lines;
    bool sweep_clear;
    /// Offset of the unwanted line closest to the sweep.
    double nearest_unwanted;
    /// Both resonances crossed by the full sweep.
    SpectralWindow crossing_window;
    /// crossing_window shrunk at each edge by the transform-limited
    /// bandwidth 2 pi / tau_p.
    SpectralWindow rephasable;
};

MaterialReport validate_material(const MaterialPreset& preset, const ChirpedPulse& pulse);

}  // namespace chirpmem::cli
