#pragma once

#include <array>

#include "chirpmem/dynamics.hpp"
#include "chirpmem/pulses.hpp"

namespace chirpmem {

/// Instantaneous eigensystem of the chirped-frame matrix
///
///   H = 1/2 [[0, A, 0], [A, 2 delta, D A], [0, D A, -2 omega_R]]
///
/// Index 0 is the lowest branch (lambda^-), 1 the middle (lambda^0) and 2 the
/// highest (lambda^+).
struct AdiabaticFrame {
    std::array<double, 3> eigenvalues{};
    std::array<Vector3r, 3> eigenvectors{};
    /// Two eigenvalues coincide to machine precision (only possible at A = 0
    /// with delta in {0, -omega_R}).  The ordering is then arbitrary.
    bool degenerate = false;

    double minus() const { return eigenvalues[0]; }
    double zero() const { return eigenvalues[1]; }
    double plus() const { return eigenvalues[2]; }
};

AdiabaticFrame instantaneous_eigensystem(double amplitude, double delta, double omega_r, double dipole_ratio);

/// Flips eigenvector signs of `frame` so each has non-negative overlap with
/// the matching vector of `previous`.
void align_signs(AdiabaticFrame& frame, const AdiabaticFrame& previous);

/// Integrals of the ordered eigenvalues over the pulse window [rad].
struct PhaseIntegrals {
    double minus = 0.0;
    double zero = 0.0;
    double plus = 0.0;
};

/// Adaptive Gauss-Kronrod quadrature of lambda^{-,0,+}(t) with
/// delta(t) = dPhi/dt - Delta over [t_c - T', t_c + T'].
PhaseIntegrals phase_integrals(const ChirpedPulse& pulse, const AtomParams& params, double abs_tol = 1e-7);

/// Propagator of one pulse assuming perfect adiabatic following.
///
/// Negative chirp gives the cyclic pattern with non-zero elements at
/// (1,2), (2,3), (3,1); positive chirp at (2,1), (3,2), (1,3).  Each element
/// is exp(i Lambda) times the boundary carrier phase and the sign picked up by
/// the continuously tracked eigenvector.  Throws NotAdiabaticWindow when
/// Delta lies outside the rephasable window of the pulse.
Propagator3 analytic_propagator(const ChirpedPulse& pulse, const AtomParams& params);

/// |U_12 U_23 U_31|^2, the probability that one pulse cyclically permutes
/// all three populations in the blue-to-red sense.
double joint_probability(const Propagator3& u);

/// Joint probability for the permutation a pulse of the given chirp sign is
/// meant to realize (the transposed pattern for positive chirp).
double joint_probability(const Propagator3& u, ChirpSign sign);

}  // namespace chirpmem
