#include "chirpmem/pulses.hpp"

#include <cmath>
#include <numbers>

namespace chirpmem {

ChirpedPulse ChirpedPulse::make(double peak_amplitude, double duration, double center_detuning,
                                double chirp, double t_center)
{
    ChirpedPulse p;
    p.peak_amplitude = peak_amplitude;
    p.duration = duration;
    p.center_detuning = center_detuning;
    p.chirp = chirp;
    p.t_center = t_center;
    p.half_window = 8.0 * duration;
    return p;
}

ChirpedPulse ChirpedPulse::centered_at(double t) const
{
    ChirpedPulse p = *this;
    p.t_center = t;
    return p;
}

bool ChirpedPulse::same_shape(const ChirpedPulse& other) const
{
    return peak_amplitude == other.peak_amplitude && duration == other.duration &&
           center_detuning == other.center_detuning && chirp == other.chirp &&
           half_window == other.half_window;
}

void ChirpedPulse::validate() const
{
    if (!(duration > 0.0)) {
        throw InvalidArgument("pulse duration tau_p must be positive");
    }
    if (!(half_window >= 5.0 * duration)) {
        throw InvalidArgument("pulse half_window must be at least 5 tau_p");
    }
    if (!std::isfinite(peak_amplitude) || !std::isfinite(center_detuning) || !std::isfinite(chirp)) {
        throw InvalidArgument("pulse parameters must be finite");
    }
}

double log_cosh(double x)
{
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

Envelope envelope_at(const ChirpedPulse& pulse, double t)
{
    const double x = (t - pulse.t_center) / pulse.duration;
    return {pulse.peak_amplitude / std::cosh(x),
            pulse.center_detuning + pulse.chirp_range() * std::tanh(x)};
}

double phase_at(const ChirpedPulse& pulse, double t)
{
    const double s = t - pulse.t_center;
    return pulse.center_detuning * s + pulse.chirp * log_cosh(s / pulse.duration);
}

cplx field_at(const ChirpedPulse& pulse, double t)
{
    if (t < pulse.window_begin() || t > pulse.window_end()) {
        return {0.0, 0.0};
    }
    return std::polar(envelope_at(pulse, t).amplitude, -phase_at(pulse, t));
}

ComplexField as_field(const ChirpedPulse& pulse)
{
    return [pulse](double t) { return field_at(pulse, t); };
}

ComplexField as_field(const Waveform& waveform)
{
    return [&waveform](double t) {
        if (t < waveform.window_begin() || t > waveform.window_end()) {
            return cplx{0.0, 0.0};
        }
        return waveform.field_at(t);
    };
}

SpectralWindow rephasable_window(const ChirpedPulse& pulse, double omega_r)
{
    if (!(omega_r > 0.0)) {
        throw InvalidArgument("omega_R must be positive");
    }
    const double sweep = std::abs(pulse.chirp_range());
    return {pulse.center_detuning - sweep + omega_r, pulse.center_detuning + sweep};
}

}  // namespace chirpmem
