#include "chirpmem/sequence.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "chirpmem/parallel.hpp"

namespace chirpmem {

namespace {

void require_gap(double earlier, double later, const char* what)
{
    // Tolerate rounding in user-supplied times.
    const double slack = 1e-12 * std::max({1.0, std::abs(earlier), std::abs(later)});
    if (later < earlier - slack) {
        std::ostringstream msg;
        msg << "timing: " << what << " (" << earlier << " > " << later << ")";
        throw InvalidArgument(msg.str());
    }
}

double clamp_gap(double dt)
{
    return dt < 0.0 ? 0.0 : dt;
}

}  // namespace

void SequenceTiming::validate_controls() const
{
    if (!(T >= 0.0) || !(T_prime > 0.0)) {
        throw InvalidArgument("timing: T must be >= 0 and T_prime > 0");
    }
    require_gap(t0 + T, t1 - T_prime, "signal window overlaps pulse 1");
    require_gap(t1 + T_prime, t2 - T_prime, "pulse 1 overlaps pulse 2");
    require_gap(t2 + T_prime, t3 - T_prime, "pulse 2 overlaps pulse 3");
}

void SequenceTiming::validate() const
{
    validate_controls();
    require_gap(t3 + T_prime, t4 - T, "echo window overlaps pulse 3");
}

double rephasing_residual(const SequenceTiming& s)
{
    if (s.chirp_sign == ChirpSign::negative) {
        return (s.t1 - s.t0) + (s.t4 - s.t3) - (s.t3 - s.t2);
    }
    return (s.t1 - s.t0) + (s.t4 - s.t3) - (s.t2 - s.t1);
}

double solve_echo_time(const SequenceTiming& s)
{
    s.validate_controls();
    const double t4 = s.chirp_sign == ChirpSign::negative ? 2.0 * s.t3 - s.t2 - s.t1 + s.t0
                                                          : s.t2 + s.t3 - 2.0 * s.t1 + s.t0;
    if (t4 - s.T < s.t3 + s.T_prime) {
        std::ostringstream msg;
        msg << "echo at t4=" << t4 << " overlaps the window of pulse 3 (ends at " << s.t3 + s.T_prime << ")";
        throw EchoInsidePulse(msg.str());
    }
    return t4;
}

PulseTrain PulseTrain::identical(const ChirpedPulse& shape, const SequenceTiming& timing)
{
    ChirpedPulse p = shape;
    p.half_window = timing.T_prime;
    return {{p.centered_at(timing.t1), p.centered_at(timing.t2), p.centered_at(timing.t3)}};
}

bool PulseTrain::identical() const
{
    return pulses[0].same_shape(pulses[1]) && pulses[0].same_shape(pulses[2]);
}

void PulseTrain::check_fits(const SequenceTiming& timing) const
{
    const std::array<double, 3> centers{timing.t1, timing.t2, timing.t3};
    for (int i = 0; i < 3; ++i) {
        pulses[i].validate();
        if (pulses[i].t_center != centers[i] || pulses[i].half_window != timing.T_prime) {
            std::ostringstream msg;
            msg << "pulse " << i + 1 << " does not match the timing (center " << pulses[i].t_center
                << ", expected " << centers[i] << "; half-window " << pulses[i].half_window << ", expected "
                << timing.T_prime << ")";
            throw InvalidArgument(msg.str());
        }
    }
}

Propagator3 single_pulse_propagator(const ChirpedPulse& pulse, const AtomParams& params, PropagatorMode mode,
                                    const IntegratorOptions& options)
{
    return mode == PropagatorMode::numeric ? pulse_propagator(params, pulse, options)
                                           : analytic_propagator(pulse, params);
}

Propagator3 overall_propagator(const PulseTrain& train, const SequenceTiming& timing, const AtomParams& params,
                               PropagatorMode mode, const IntegratorOptions& options)
{
    timing.validate();
    train.check_fits(timing);

    // The free Hamiltonian is time independent, so equal shapes at different
    // centers share one propagator over their own windows.
    std::array<Propagator3, 3> u;
    u[0] = single_pulse_propagator(train.pulses[0], params, mode, options);
    for (int i = 1; i < 3; ++i) {
        if (train.pulses[i].same_shape(train.pulses[0])) {
            u[i] = u[0];
        } else {
            u[i] = single_pulse_propagator(train.pulses[i], params, mode, options);
        }
    }

    const double tp = timing.T_prime;
    const double g1 = clamp_gap(timing.t1 - tp - (timing.t0 + timing.T));
    const double g2 = clamp_gap(timing.t2 - tp - (timing.t1 + tp));
    const double g3 = clamp_gap(timing.t3 - tp - (timing.t2 + tp));
    const double g4 = clamp_gap(timing.t4 - timing.T - (timing.t3 + tp));
    return free_propagator(params, g4) * u[2] * free_propagator(params, g3) * u[1] * free_propagator(params, g2) *
           u[0] * free_propagator(params, g1);
}

cplx coherence_factor(const Propagator3& u)
{
    return std::conj(u(0, 0)) * u(1, 1);
}

double global_rephasing_phase(const SequenceTiming& s, double omega_r)
{
    const double sign = s.chirp_sign == ChirpSign::negative ? -1.0 : 1.0;
    return sign * omega_r * (s.t1 - 2.0 * s.t2 + s.t3);
}

cplx ideal_coherence_factor(const SequenceTiming& s, double omega_r, double delta)
{
    return std::polar(1.0, delta * (2.0 * s.T - rephasing_residual(s)) + global_rephasing_phase(s, omega_r));
}

std::vector<CoherenceRow> coherence_phase_scan(const PulseTrain& train, const SequenceTiming& timing,
                                               double omega_r, double dipole_ratio,
                                               std::span<const double> delta_grid, PropagatorMode mode,
                                               const IntegratorOptions& options, unsigned workers)
{
    timing.validate();
    train.check_fits(timing);
    std::vector<CoherenceRow> rows(delta_grid.size());
    parallel_for(delta_grid.size(), workers, [&](std::size_t i) {
        const AtomParams params{delta_grid[i], omega_r, dipole_ratio};
        const cplx f = coherence_factor(overall_propagator(train, timing, params, mode, options));
        rows[i] = {delta_grid[i], f, std::arg(f)};
    });
    std::vector<double> phases(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        phases[i] = rows[i].phase_unwrapped;
    }
    unwrap_phases(phases);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].phase_unwrapped = phases[i];
    }
    return rows;
}

cplx inverted_coherence_factor(const PulseTrain& train, double t_prime, const SequenceTiming& timing,
                               const AtomParams& params, PropagatorMode mode, const IntegratorOptions& options)
{
    timing.validate_controls();
    train.check_fits(timing);
    const double tp = timing.T_prime;
    const bool negative = timing.chirp_sign == ChirpSign::negative;
    const double lo = negative ? timing.t2 + tp : timing.t1 + tp;
    const double hi = negative ? timing.t3 - tp : timing.t2 - tp;
    if (t_prime - timing.T < lo || t_prime > hi) {
        std::ostringstream msg;
        msg << "primary echo time " << t_prime << " must satisfy " << lo << " <= t' - T and t' <= " << hi;
        throw InvalidArgument(msg.str());
    }

    const Propagator3 u1 = single_pulse_propagator(train.pulses[0], params, mode, options);
    Propagator3 u = free_propagator(params, timing.t1 - tp - (timing.t0 + timing.T));
    u = u1 * u;
    if (negative) {
        const Propagator3 u2 = train.pulses[1].same_shape(train.pulses[0])
                                   ? u1
                                   : single_pulse_propagator(train.pulses[1], params, mode, options);
        u = u2 * free_propagator(params, timing.t2 - timing.t1 - 2.0 * tp) * u;
        u = free_propagator(params, t_prime - timing.T - (timing.t2 + tp)) * u;
    } else {
        u = free_propagator(params, t_prime - timing.T - (timing.t1 + tp)) * u;
    }
    return std::conj(u(2, 1)) * u(1, 0);
}

cplx rephasing_factor(const Propagator3& u1, const Propagator3& u2, const Propagator3& u3)
{
    const cplx r1 = u1(2, 0) * u2(1, 2) * u3(0, 1);
    const cplx r2 = u1(0, 1) * u2(2, 0) * u3(1, 2);
    return std::conj(r1) * r2;
}

void unwrap_phases(std::span<double> phases)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double offset = 0.0;
    for (std::size_t i = 1; i < phases.size(); ++i) {
        const double raw = phases[i] + offset;
        const double jump = raw - phases[i - 1];
        const double k = std::round(jump / two_pi);
        offset -= k * two_pi;
        phases[i] = raw - k * two_pi;
    }
}

}  // namespace chirpmem
