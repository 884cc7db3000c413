#pragma once

#include <array>
#include <span>
#include <vector>

#include "chirpmem/adiabatic.hpp"
#include "chirpmem/dynamics.hpp"
#include "chirpmem/pulses.hpp"

namespace chirpmem {

/// Event times of the three-pulse protocol.
///
/// The signal occupies [t0 - T, t0 + T], control pulse i is centered at t_i
/// with half-window T', and the secondary echo is expected around t4.
struct SequenceTiming {
    double t0 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double t4 = 0.0;
    double T = 2.0;        ///< signal half-window
    double T_prime = 8.0;  ///< control half-window
    ChirpSign chirp_sign = ChirpSign::negative;

    /// Checks the ordering t0+T <= t1-T' <= ... <= t3+T' <= t4-T.
    /// Throws InvalidArgument naming the violated gap.
    void validate() const;
    /// Same checks without the echo window (t4 ignored).
    void validate_controls() const;
};

/// negative chirp: (t1-t0) + (t4-t3) - (t3-t2)
/// positive chirp: (t1-t0) + (t4-t3) - (t2-t1)
double rephasing_residual(const SequenceTiming& timing);

/// t4 that zeroes the residual.  Throws EchoInsidePulse when t4 - T < t3 + T'.
double solve_echo_time(const SequenceTiming& timing);

/// Three control pulses.  Built from one shape and the timing in the usual
/// case; distinct shapes are accepted but reported by identical().
struct PulseTrain {
    std::array<ChirpedPulse, 3> pulses;

    /// Copies `shape` to t1, t2, t3 with half-window T'.
    static PulseTrain identical(const ChirpedPulse& shape, const SequenceTiming& timing);

    bool identical() const;
    /// Throws InvalidArgument if a pulse is not centered at its t_i or its
    /// window differs from T'.
    void check_fits(const SequenceTiming& timing) const;
};

enum class PropagatorMode { numeric, adiabatic };

Propagator3 single_pulse_propagator(const ChirpedPulse& pulse, const AtomParams& params, PropagatorMode mode,
                                    const IntegratorOptions& options = {});

/// U = F(t4-T - t3-T') U3 F(t3-T' - t2-T') U2 F(t2-T' - t1-T') U1 F(t1-T' - t0-T)
Propagator3 overall_propagator(const PulseTrain& train, const SequenceTiming& timing, const AtomParams& params,
                               PropagatorMode mode, const IntegratorOptions& options = {});

/// conj(U_11) U_22: the factor multiplying a* b between t0+T and t4-T.
cplx coherence_factor(const Propagator3& u);

/// Factor expected for three identical perfect permutations:
/// exp(i Delta (2T - residual)) exp(-/+ i omega_R (t1 - 2 t2 + t3)), minus
/// sign for negative chirp.
cplx ideal_coherence_factor(const SequenceTiming& timing, double omega_r, double delta);

/// Constant phase picked up by every atom in the rephased coherence.
double global_rephasing_phase(const SequenceTiming& timing, double omega_r);

struct CoherenceRow {
    double delta;
    cplx factor;
    double phase_unwrapped;
};

/// coherence_factor over a Delta grid; phases unwrapped along the grid.
std::vector<CoherenceRow> coherence_phase_scan(const PulseTrain& train, const SequenceTiming& timing,
                                               double omega_r, double dipole_ratio,
                                               std::span<const double> delta_grid, PropagatorMode mode,
                                               const IntegratorOptions& options = {}, unsigned workers = 1);

/// Transfer factor of the inverted medium at the primary echo time t' (window
/// [t' - T, t' + T]): conj(U'_32) U'_21 with U' running from t0+T to t'-T.
///
/// Negative chirp uses pulses 1 and 2 with t' in the gap between pulses 2
/// and 3; positive chirp uses pulse 1 only with t' between pulses 1 and 2.
/// The factor multiplies conj(a* b) of the signal coherence.  Throws
/// InvalidArgument when the echo window overlaps a control window.
cplx inverted_coherence_factor(const PulseTrain& train, double t_prime, const SequenceTiming& timing,
                               const AtomParams& params, PropagatorMode mode,
                               const IntegratorOptions& options = {});

/// R = conj(R1) R2 with R1 = [U1]_31 [U2]_23 [U3]_12 and
/// R2 = [U1]_12 [U2]_31 [U3]_23, built from the three pulse propagators
/// alone (no free evolution).  Index notation is one-based here.
cplx rephasing_factor(const Propagator3& u1, const Propagator3& u2, const Propagator3& u3);

/// Unwraps a phase sequence in place (jumps larger than pi folded by 2 pi).
void unwrap_phases(std::span<double> phases);

}  // namespace chirpmem
