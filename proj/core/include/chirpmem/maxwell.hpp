#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "chirpmem/ensemble.hpp"
#include "chirpmem/pulses.hpp"
#include "chirpmem/sequence.hpp"

namespace chirpmem {

/// Optically dense medium.  Number density, dipole moment and wavenumber
/// only enter through alpha_d.
struct MediumSpec {
    double alpha_d = 1.0;  ///< absorption constant of |1>-|2> [1/length]
    double dipole_ratio = 1.0;
    double omega_r = 10.0;
    SpectralDistribution spectrum = SpectralDistribution::uniform(-20.0, 20.0);
    double length = 6.0;

    /// alpha_d / (pi g(0)).  Throws InvalidArgument unless g(0) > 0.
    double coupling() const;
    void validate() const;
};

struct MaxwellGrid {
    std::size_t z_steps = 100;
    std::size_t time_steps = 8192;  ///< RK4 steps per control window
    std::size_t delta_nodes = 201;
    std::size_t delta_panels = 1;
};

/// Omega_j(z, xi) on a uniform (z, retarded time) grid.
struct FieldGrid {
    int pulse_index = 0;  ///< 1, 2 or 3
    ChirpedPulse input;   ///< field injected at z = 0
    std::vector<double> z;
    double xi_begin = 0.0;
    double dxi = 0.0;
    std::size_t time_steps = 0;
    std::vector<cplx> values;  ///< z-major, (time_steps + 1) samples per z

    std::size_t nodes() const { return time_steps + 1; }
    double xi(std::size_t k) const { return xi_begin + dxi * static_cast<double>(k); }
    std::span<const cplx> row(std::size_t iz) const { return {values.data() + iz * nodes(), nodes()}; }
    std::span<cplx> row(std::size_t iz) { return {values.data() + iz * nodes(), nodes()}; }

    /// Trapezoid integral of |Omega|^2 over the window at z index iz.
    double energy(std::size_t iz) const;
    double peak(std::size_t iz) const;
};

/// Node and midpoint samples of one stored field row for FixedStepStepper.
/// Midpoints come from cubic interpolation of Omega exp(i Phi_input), which is
/// smooth even where the carrier phase is not.
struct SampledRow {
    std::vector<cplx> nodes;
    std::vector<cplx> mids;

    SampledField view(double dt) const { return {dt, nodes, mids}; }
};

SampledRow sample_row(const FieldGrid& grid, std::size_t iz);

/// Same interpolation for a field row with an arbitrary known carrier phase.
void interpolate_midpoints(std::span<const cplx> nodes, std::span<const cplx> demod,
                           std::span<const cplx> remod_mid, std::span<cplx> mids);

struct PropagationOptions {
    MaxwellGrid grid;
    unsigned workers = 1;
    /// Called with (pulse index, z index, field row) right after a row is
    /// final and before anything at larger z uses it.
    std::function<void(int, std::size_t, std::span<cplx>)> field_hook;
    /// Re-run with half the time step and compare output energies.
    bool check_resolution = false;
};

struct ControlPropagation {
    MediumSpec medium;
    MaxwellGrid grid;
    std::array<double, 3> centers{};
    std::array<FieldGrid, 3> fields;
    SpectralQuadrature quadrature;
    /// Lab-frame amplitudes after the third window, z-major over the
    /// quadrature nodes; all atoms start in |1>.
    std::vector<Vector3c> final_states;
    /// Largest | |psi|^2 change | of any atom across any single pulse.
    double max_norm_defect = 0.0;
    /// Relative output-energy change per pulse when dxi is halved (only
    /// when check_resolution was requested, else empty).
    std::vector<double> resolution_change;
    bool resolution_ok = true;

    double z_alpha(std::size_t iz) const { return medium.alpha_d * fields[0].z[iz]; }
    const Vector3c& final_state(std::size_t iz, std::size_t node) const
    {
        return final_states[iz * quadrature.size() + node];
    }
};

/// Marches the three control pulses through the medium one after another in
/// the retarded frame.  Each z step is a Heun predictor-corrector; the atoms
/// at every (Delta node, z) are advanced by FixedStepStepper under the local
/// field, and free evolution between windows is exact.
ControlPropagation propagate_controls(const MediumSpec& medium, const ChirpedPulse& pulse,
                                      const std::array<double, 3>& centers, const PropagationOptions& options = {});

struct RephasingMap {
    std::vector<double> deltas;
    std::vector<std::size_t> z_index;
    std::vector<double> z_alpha;
    /// delta-major: value(i, j) = data[i * z.size() + j]
    std::vector<cplx> r;
    std::vector<cplx> r1;
    std::vector<cplx> r2;

    cplx at(std::size_t i_delta, std::size_t j_z) const { return r[i_delta * z_index.size() + j_z]; }
};

/// R(Delta, z) = conj(R1) R2 with every U_j integrated per basis state under
/// the stored field Omega_j(z, .).  z_stride selects every n-th z row.
RephasingMap rephasing_map(const ControlPropagation& controls, std::span<const double> delta_grid,
                           std::size_t z_stride = 1, unsigned workers = 1);

/// Single-atom pulse propagators under the stored fields at one z row.
std::array<Propagator3, 3> stored_pulse_propagators(const ControlPropagation& controls, std::size_t iz,
                                                    double delta);

struct EchoOptions {
    /// RK4 steps across each of the signal and echo windows.
    std::size_t window_steps = 2048;
    /// Also run the unlinearized model at 1x and 2x signal amplitude.
    bool check_linearity = true;
    unsigned workers = 1;
};

struct EchoResult {
    SequenceTiming timing;
    ChirpedPulse signal;
    std::vector<double> z_alpha;
    /// echo energy at z / signal energy at z = 0
    std::vector<double> efficiency;
    /// Echo field at the exit face over [t4 - T, t4 + T].
    double echo_xi_begin = 0.0;
    double echo_dxi = 0.0;
    std::vector<cplx> echo_out;
    double echo_peak_time = 0.0;
    double signal_energy = 0.0;
    /// Efficiency at the exit face from the unlinearized model.
    double efficiency_full = 0.0;
    double efficiency_full_double = 0.0;
    bool nonlinear = false;

    /// Efficiency at the z node closest to alpha_d L (exact when the grid
    /// contains that depth).
    double efficiency_at(double z_alpha_value) const;
};

/// Weak signal in [t0 - T, t0 + T] followed by the three controls.  Pass 1
/// is `controls`; pass 2 propagates the signal and the echo in
/// [t4 - T, t4 + T] with the atoms perturbed to first order about the
/// control-driven states.  Fields radiated between control windows are not
/// propagated.  Throws InvalidArgument if the signal is stronger than
/// 1e-3 A0 or the timing does not match the control run.
EchoResult weak_signal_echo(const ControlPropagation& controls, const ChirpedPulse& control_shape,
                            const SequenceTiming& timing, const ChirpedPulse& signal,
                            const EchoOptions& options = {});

}  // namespace chirpmem
