#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "chirpmem/pulses.hpp"
#include "chirpmem/types.hpp"

namespace chirpmem {

/// Single Lambda atom: |1> and |3> are the lower states split by omega_R,
/// |2> is the excited state whose |1>-|2> resonance sits `detuning` away
/// from the ensemble line center.
struct AtomParams {
    double detuning = 0.0;      ///< Delta [rad/time]
    double omega_r = 1.0;       ///< lower-level splitting [rad/time], > 0
    double dipole_ratio = 1.0;  ///< D = d32 / d12
};

/// Probability amplitudes of |1>, |2>, |3>.
struct AtomState {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    cplx c{0.0, 0.0};

    static AtomState ground() { return {}; }
    static AtomState basis(int level);  // level in {1, 2, 3}

    Vector3c vector() const { return {a, b, c}; }
    static AtomState from(const Vector3c& v) { return {v(0), v(1), v(2)}; }

    double norm_squared() const { return std::norm(a) + std::norm(b) + std::norm(c); }
};

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    /// Upper bound on the adaptive step; 0 picks span / 64.
    double max_step = 0.0;
    std::size_t max_steps = 20'000'000;
    /// When nonzero, use classic RK4 with this many uniform steps instead of
    /// the adaptive Dormand-Prince pair.
    std::size_t fixed_steps = 0;

    static IntegratorOptions with_tolerance(double tol)
    {
        IntegratorOptions o;
        o.rel_tol = tol;
        o.abs_tol = tol * 1e-3;
        return o;
    }
};

/// Advances the amplitudes from t_start to t_end under
///
///   d/dt (a,b,c) = (i/2) [[0, W*, 0], [W, -2 Delta, D W], [0, D W*, -2 omega_R]] (a,b,c)
///
/// where W = field(t).  With no field, b picks up exp(-i Delta t) and c picks
/// up exp(-i omega_R t).  Throws IntegrationError on step-size underflow.
AtomState integrate_state(const AtomState& state, const AtomParams& params, const ComplexField& field,
                          double t_start, double t_end, const IntegratorOptions& options = {});

Propagator3 propagator(const AtomParams& params, const ComplexField& field, double t_start, double t_end,
                       const IntegratorOptions& options = {});

/// Propagator of the pulse over its own truncation window.
Propagator3 pulse_propagator(const AtomParams& params, const ChirpedPulse& pulse,
                             const IntegratorOptions& options = {});

/// diag(1, exp(-i Delta dt), exp(-i omega_R dt)).
Propagator3 free_propagator(const AtomParams& params, double dt);

/// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const Propagator3& u);

/// Field samples on a uniform grid for the fixed-step integrator.
///
/// `nodes` holds n+1 samples at t0 + k dt and `mids` holds n samples at
/// t0 + (k + 1/2) dt.
struct SampledField {
    double dt = 0.0;
    std::span<const cplx> nodes;
    std::span<const cplx> mids;

    std::size_t steps() const { return mids.size(); }
};

/// Classic RK4 on the amplitudes in the interaction picture of the free
/// Hamiltonian.  Free evolution is therefore exact and the truncation error
/// scales with the field strength.  Used by the Maxwell-Bloch solver, where
/// the field is only known on a grid.
class FixedStepStepper {
public:
    FixedStepStepper(double omega_r, double dipole_ratio, double dt, std::size_t steps);

    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }

    /// Evolves lab-frame amplitudes across the grid.  If `polarization` is
    /// non-null, adds weight * (a* b + D c* b) at each of the n+1 grid nodes.
    void evolve(Vector3c& y, double delta, const SampledField& field, cplx* polarization = nullptr,
                double weight = 0.0) const;

    /// Evolves each column of `u`.
    void evolve(Propagator3& u, double delta, const SampledField& field) const;

private:
    double omega_r_;
    double dipole_;
    double dt_;
    std::size_t steps_;
    std::vector<cplx> omega_phase_;  // exp(-i omega_R s) at every half step
};

}  // namespace chirpmem
