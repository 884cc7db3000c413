#pragma once

#include <functional>

#include "chirpmem/types.hpp"

namespace chirpmem {

/// Direction of the frequency sweep.  Negative chirp sweeps blue to red.
enum class ChirpSign { negative, positive };

/// Complex Rabi-frequency field Omega(t) = A(t) exp(-i Phi(t)) in the frame
/// rotating at the ensemble line center.
using ComplexField = std::function<cplx(double)>;

struct Envelope {
    double amplitude;      ///< real Rabi amplitude A(t) [rad/time]
    double inst_detuning;  ///< dPhi/dt relative to the line center [rad/time]
};

/// Interface for control waveforms described by a real amplitude and an
/// accumulated carrier phase.
class Waveform {
public:
    virtual ~Waveform() = default;

    virtual Envelope envelope_at(double t) const = 0;
    virtual double phase_at(double t) const = 0;

    /// Support of the waveform used by the solvers, [begin, end].
    virtual double window_begin() const = 0;
    virtual double window_end() const = 0;

    cplx field_at(double t) const
    {
        return std::polar(envelope_at(t).amplitude, -phase_at(t));
    }
};

/// Hyperbolic-secant pulse with a tanh frequency chirp.
///
///   A(t)      = A0 sech((t - t_c) / tau_p)
///   dPhi/dt   = delta0 + (mu / tau_p) tanh((t - t_c) / tau_p)
///   Phi(t_c)  = 0
///
/// The pulse is truncated to [t_c - T', t_c + T'] where T' is `half_window`.
struct ChirpedPulse {
    double peak_amplitude = 0.0;   ///< A0 [rad/time]
    double duration = 1.0;         ///< tau_p [time]
    double center_detuning = 0.0;  ///< delta0 [rad/time]
    double chirp = 0.0;            ///< mu, dimensionless; sweep range is mu/tau_p
    double t_center = 0.0;
    double half_window = 8.0;      ///< T' [time]

    /// Builds a pulse with the default truncation T' = 8 tau_p.
    static ChirpedPulse make(double peak_amplitude, double duration, double center_detuning,
                             double chirp, double t_center = 0.0);

    double chirp_range() const { return chirp / duration; }
    ChirpSign chirp_sign() const { return chirp < 0.0 ? ChirpSign::negative : ChirpSign::positive; }
    double window_begin() const { return t_center - half_window; }
    double window_end() const { return t_center + half_window; }

    /// Same pulse shape centered elsewhere.
    ChirpedPulse centered_at(double t) const;

    /// True when the two pulses differ at most in their center time.
    bool same_shape(const ChirpedPulse& other) const;

    /// Throws InvalidArgument if tau_p <= 0 or T' < 5 tau_p.
    void validate() const;
};

Envelope envelope_at(const ChirpedPulse& pulse, double t);
double phase_at(const ChirpedPulse& pulse, double t);

/// Omega(t) = A(t) exp(-i Phi(t)); zero outside the truncation window.
cplx field_at(const ChirpedPulse& pulse, double t);
ComplexField as_field(const ChirpedPulse& pulse);

/// Range of atomic offsets Delta for which the sweep crosses both the
/// |1>-|2> and the |3>-|2> resonance.  Empty when lo >= hi.
struct SpectralWindow {
    double lo;
    double hi;

    bool empty() const { return !(lo < hi); }
    bool contains(double delta) const { return !empty() && delta >= lo && delta <= hi; }
    double width() const { return empty() ? 0.0 : hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
};

SpectralWindow rephasable_window(const ChirpedPulse& pulse, double omega_r);

/// Waveform adapter for ChirpedPulse.
class SechTanhWaveform final : public Waveform {
public:
    explicit SechTanhWaveform(ChirpedPulse pulse) : pulse_(pulse) {}

    Envelope envelope_at(double t) const override { return chirpmem::envelope_at(pulse_, t); }
    double phase_at(double t) const override { return chirpmem::phase_at(pulse_, t); }
    double window_begin() const override { return pulse_.window_begin(); }
    double window_end() const override { return pulse_.window_end(); }

    const ChirpedPulse& pulse() const { return pulse_; }

private:
    ChirpedPulse pulse_;
};

ComplexField as_field(const Waveform& waveform);

/// log(cosh(x)) without overflow.
double log_cosh(double x);

}  // namespace chirpmem
