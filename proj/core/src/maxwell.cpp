#include "chirpmem/maxwell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chirpmem/parallel.hpp"

namespace chirpmem {

namespace {

// Atom blocks per polarization sum.  Fixed so sums do not depend on the
// worker count.
constexpr std::size_t polarization_blocks = 16;

// Runs atom(i, pol) for every atom and returns the block-ordered sum of the
// per-block polarization buffers.
template <class Atom>
void sum_polarization(std::size_t atoms, std::size_t nodes, unsigned workers, std::vector<cplx>& out, Atom&& atom)
{
    const std::size_t blocks = std::max<std::size_t>(1, std::min(polarization_blocks, atoms));
    std::vector<std::vector<cplx>> partial(blocks, std::vector<cplx>(nodes, cplx{}));
    parallel_for(blocks, workers, [&](std::size_t b) {
        const std::size_t begin = atoms * b / blocks;
        const std::size_t end = atoms * (b + 1) / blocks;
        for (std::size_t i = begin; i < end; ++i) {
            atom(i, partial[b].data());
        }
    });
    out.assign(nodes, cplx{});
    for (const auto& p : partial) {
        for (std::size_t k = 0; k < nodes; ++k) {
            out[k] += p[k];
        }
    }
}

struct Carrier {
    std::vector<cplx> demod;      // exp(+i Phi) at nodes
    std::vector<cplx> remod_mid;  // exp(-i Phi) at midpoints
};

template <class Phase>
Carrier make_carrier(double xi_begin, double dxi, std::size_t steps, Phase&& phase)
{
    Carrier c;
    c.demod.resize(steps + 1);
    c.remod_mid.resize(steps);
    for (std::size_t k = 0; k <= steps; ++k) {
        c.demod[k] = std::polar(1.0, phase(xi_begin + dxi * static_cast<double>(k)));
    }
    for (std::size_t k = 0; k < steps; ++k) {
        c.remod_mid[k] = std::polar(1.0, -phase(xi_begin + dxi * (static_cast<double>(k) + 0.5)));
    }
    return c;
}

Carrier pulse_carrier(const FieldGrid& g)
{
    return make_carrier(g.xi_begin, g.dxi, g.time_steps, [&](double t) { return phase_at(g.input, t); });
}

double trapezoid_energy(std::span<const cplx> row, double dx)
{
    if (row.size() < 2) {
        return 0.0;
    }
    double s = 0.5 * (std::norm(row.front()) + std::norm(row.back()));
    for (std::size_t k = 1; k + 1 < row.size(); ++k) {
        s += std::norm(row[k]);
    }
    return s * dx;
}

void free_evolve(Vector3c& v, double delta, double omega_r, double dt)
{
    v(1) *= std::polar(1.0, -delta * dt);
    v(2) *= std::polar(1.0, -omega_r * dt);
}

std::vector<double> make_z_grid(double length, std::size_t steps)
{
    std::vector<double> z(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        z[k] = length * static_cast<double>(k) / static_cast<double>(steps);
    }
    return z;
}

}  // namespace

double MediumSpec::coupling() const
{
    const double g0 = spectrum.density(0.0);
    if (!(g0 > 0.0)) {
        throw InvalidArgument("medium: the spectral density must be positive at the line center");
    }
    return alpha_d / (std::numbers::pi * g0);
}

void MediumSpec::validate() const
{
    if (!(alpha_d >= 0.0)) {
        throw InvalidArgument("medium: alpha_d must be >= 0");
    }
    if (!(length > 0.0)) {
        throw InvalidArgument("medium: length must be positive");
    }
    if (!(omega_r > 0.0)) {
        throw InvalidArgument("medium: omega_R must be positive");
    }
    (void)coupling();
}

double FieldGrid::energy(std::size_t iz) const
{
    return trapezoid_energy(row(iz), dxi);
}

double FieldGrid::peak(std::size_t iz) const
{
    double m = 0.0;
    for (cplx v : row(iz)) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

void interpolate_midpoints(std::span<const cplx> nodes, std::span<const cplx> demod,
                           std::span<const cplx> remod_mid, std::span<cplx> mids)
{
    const std::size_t n = mids.size();
    if (nodes.size() != n + 1 || n < 3) {
        throw InvalidArgument("midpoint interpolation needs at least three intervals");
    }
    auto e = [&](std::size_t k) { return nodes[k] * demod[k]; };
    for (std::size_t k = 0; k < n; ++k) {
        cplx m;
        if (k == 0) {
            m = (5.0 * e(0) + 15.0 * e(1) - 5.0 * e(2) + e(3)) / 16.0;
        } else if (k == n - 1) {
            m = (e(n - 3) - 5.0 * e(n - 2) + 15.0 * e(n - 1) + 5.0 * e(n)) / 16.0;
        } else {
            m = (-e(k - 1) + 9.0 * e(k) + 9.0 * e(k + 1) - e(k + 2)) / 16.0;
        }
        mids[k] = m * remod_mid[k];
    }
}

SampledRow sample_row(const FieldGrid& grid, std::size_t iz)
{
    const Carrier c = pulse_carrier(grid);
    SampledRow out;
    const auto row = grid.row(iz);
    out.nodes.assign(row.begin(), row.end());
    out.mids.resize(grid.time_steps);
    interpolate_midpoints(out.nodes, c.demod, c.remod_mid, out.mids);
    return out;
}

ControlPropagation propagate_controls(const MediumSpec& medium, const ChirpedPulse& pulse,
                                      const std::array<double, 3>& centers, const PropagationOptions& options)
{
    medium.validate();
    pulse.validate();
    const MaxwellGrid& grid = options.grid;
    if (grid.z_steps < 1 || grid.time_steps < 4) {
        throw InvalidArgument("maxwell grid: need z_steps >= 1 and time_steps >= 4");
    }
    for (int j = 0; j < 2; ++j) {
        if (centers[j + 1] - centers[j] < 2.0 * pulse.half_window) {
            throw InvalidArgument("control windows overlap");
        }
    }

    const double kappa = medium.coupling();
    ControlPropagation out;
    out.medium = medium;
    out.grid = grid;
    out.centers = centers;
    out.quadrature = make_quadrature(medium.spectrum, grid.delta_nodes, grid.delta_panels);

    const std::size_t nz = grid.z_steps;
    const std::size_t nt = grid.time_steps;
    const std::size_t natoms = out.quadrature.size();
    const double dz = medium.length / static_cast<double>(nz);
    const std::vector<double> z = make_z_grid(medium.length, nz);
    const std::span<const double> deltas = out.quadrature.nodes;
    const std::span<const double> weights = out.quadrature.weights;

    std::vector<Vector3c> states((nz + 1) * natoms, AtomState::ground().vector());
    std::vector<double> norm_defect(natoms, 0.0);

    for (int j = 0; j < 3; ++j) {
        FieldGrid& f = out.fields[j];
        f.pulse_index = j + 1;
        f.input = pulse.centered_at(centers[j]);
        f.z = z;
        f.xi_begin = f.input.window_begin();
        f.time_steps = nt;
        f.dxi = (f.input.window_end() - f.input.window_begin()) / static_cast<double>(nt);
        f.values.assign((nz + 1) * (nt + 1), cplx{});
        for (std::size_t k = 0; k <= nt; ++k) {
            f.values[k] = field_at(f.input, f.xi(k));
        }
        if (options.field_hook) {
            options.field_hook(j + 1, 0, f.row(0));
        }

        const Carrier carrier = pulse_carrier(f);
        const FixedStepStepper stepper(medium.omega_r, medium.dipole_ratio, f.dxi, nt);
        std::vector<cplx> mids(nt);

        // Advances the atoms at z index iz under `row`; returns the
        // polarization at the nodes.  Only commits the new states if asked.
        auto evolve_row = [&](std::size_t iz, std::span<const cplx> row, bool commit, std::vector<cplx>& pol) {
            interpolate_midpoints(row, carrier.demod, carrier.remod_mid, mids);
            const SampledField sf{f.dxi, row, mids};
            sum_polarization(natoms, nt + 1, options.workers, pol, [&](std::size_t i, cplx* p) {
                Vector3c v = states[iz * natoms + i];
                const double before = v.squaredNorm();
                stepper.evolve(v, deltas[i], sf, p, weights[i]);
                if (commit) {
                    norm_defect[i] = std::max(norm_defect[i], std::abs(v.squaredNorm() - before));
                    states[iz * natoms + i] = v;
                }
            });
        };

        std::vector<cplx> pol_n, pol_star, predicted(nt + 1);
        const cplx ik{0.0, kappa};
        for (std::size_t n = 0; n < nz; ++n) {
            const auto row_n = f.row(n);
            evolve_row(n, row_n, true, pol_n);
            auto row_next = f.row(n + 1);
            if (kappa == 0.0) {
                std::copy(row_n.begin(), row_n.end(), row_next.begin());
            } else {
                for (std::size_t k = 0; k <= nt; ++k) {
                    predicted[k] = row_n[k] + dz * ik * pol_n[k];
                }
                evolve_row(n + 1, predicted, false, pol_star);
                for (std::size_t k = 0; k <= nt; ++k) {
                    row_next[k] = row_n[k] + 0.5 * dz * ik * (pol_n[k] + pol_star[k]);
                }
            }
            if (options.field_hook) {
                options.field_hook(j + 1, n + 1, row_next);
            }
        }
        evolve_row(nz, f.row(nz), true, pol_n);

        if (j < 2) {
            const double gap = (centers[j + 1] - pulse.half_window) - (centers[j] + pulse.half_window);
            for (std::size_t iz = 0; iz <= nz; ++iz) {
                for (std::size_t i = 0; i < natoms; ++i) {
                    free_evolve(states[iz * natoms + i], deltas[i], medium.omega_r, gap);
                }
            }
        }
    }

    out.final_states = std::move(states);
    out.max_norm_defect = *std::max_element(norm_defect.begin(), norm_defect.end());

    if (options.check_resolution) {
        PropagationOptions fine = options;
        fine.grid.time_steps = 2 * nt;
        fine.check_resolution = false;
        fine.field_hook = nullptr;
        const ControlPropagation ref = propagate_controls(medium, pulse, centers, fine);
        for (int j = 0; j < 3; ++j) {
            const double e = out.fields[j].energy(nz);
            const double e_ref = ref.fields[j].energy(nz);
            const double change = std::abs(e - e_ref) / std::max(e_ref, 1e-300);
            out.resolution_change.push_back(change);
            out.resolution_ok = out.resolution_ok && change <= 0.01;
        }
    }
    return out;
}

namespace {

std::array<Propagator3, 3> propagators_from_rows(const ControlPropagation& controls,
                                                 const std::array<SampledRow, 3>& rows, double delta)
{
    std::array<Propagator3, 3> u;
    for (int j = 0; j < 3; ++j) {
        const FieldGrid& f = controls.fields[j];
        const FixedStepStepper stepper(controls.medium.omega_r, controls.medium.dipole_ratio, f.dxi, f.time_steps);
        u[j] = Propagator3::Identity();
        stepper.evolve(u[j], delta, rows[j].view(f.dxi));
    }
    return u;
}

std::array<SampledRow, 3> sample_rows(const ControlPropagation& controls, std::size_t iz)
{
    return {sample_row(controls.fields[0], iz), sample_row(controls.fields[1], iz),
            sample_row(controls.fields[2], iz)};
}

}  // namespace

std::array<Propagator3, 3> stored_pulse_propagators(const ControlPropagation& controls, std::size_t iz,
                                                    double delta)
{
    return propagators_from_rows(controls, sample_rows(controls, iz), delta);
}

RephasingMap rephasing_map(const ControlPropagation& controls, std::span<const double> delta_grid,
                           std::size_t z_stride, unsigned workers)
{
    if (z_stride == 0) {
        throw InvalidArgument("z stride must be positive");
    }
    RephasingMap map;
    map.deltas.assign(delta_grid.begin(), delta_grid.end());
    const std::size_t nz = controls.fields[0].z.size();
    for (std::size_t iz = 0; iz < nz; iz += z_stride) {
        map.z_index.push_back(iz);
        map.z_alpha.push_back(controls.z_alpha(iz));
    }
    const std::size_t nzs = map.z_index.size();
    map.r.resize(map.deltas.size() * nzs);
    map.r1.resize(map.r.size());
    map.r2.resize(map.r.size());

    for (std::size_t j = 0; j < nzs; ++j) {
        const auto rows = sample_rows(controls, map.z_index[j]);
        parallel_for(map.deltas.size(), workers, [&](std::size_t i) {
            const auto u = propagators_from_rows(controls, rows, map.deltas[i]);
            const std::size_t idx = i * nzs + j;
            map.r1[idx] = u[0](2, 0) * u[1](1, 2) * u[2](0, 1);
            map.r2[idx] = u[0](0, 1) * u[1](2, 0) * u[2](1, 2);
            map.r[idx] = rephasing_factor(u[0], u[1], u[2]);
        });
    }
    return map;
}

double EchoResult::efficiency_at(double z_alpha_value) const
{
    if (z_alpha.empty()) {
        throw InvalidArgument("empty echo result");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < z_alpha.size(); ++k) {
        if (std::abs(z_alpha[k] - z_alpha_value) < std::abs(z_alpha[best] - z_alpha_value)) {
            best = k;
        }
    }
    return efficiency[best];
}

namespace {

// Evolution of the weak-field perturbation across a window without control
// field, for every atom at one z.
struct WeakWindow {
    const ControlPropagation& controls;
    double dt;
    std::size_t steps;
    bool full;  // unlinearized
    unsigned workers;
    const Carrier& carrier;
    std::vector<cplx> mids;

    // psi0: lab-frame background states at window start (stationary in the
    // interaction picture); dpsi: perturbation at window start, replaced by
    // the value at window end when commit is set.
    void run(std::span<const Vector3c> psi0, std::span<Vector3c> dpsi, std::span<const cplx> row, bool commit,
             std::vector<cplx>& pol)
    {
        interpolate_midpoints(row, carrier.demod, carrier.remod_mid, mids);
        const auto& q = controls.quadrature;
        const double omega_r = controls.medium.omega_r;
        const double D = controls.medium.dipole_ratio;
        const std::size_t natoms = q.size();
        const FixedStepStepper stepper(omega_r, D, dt, steps);
        const SampledField sf{dt, row, mids};

        sum_polarization(natoms, steps + 1, workers, pol, [&](std::size_t i, cplx* p) {
            const double delta = q.nodes[i];
            const double w = q.weights[i];
            const Vector3c& y0 = psi0[i];
            if (full) {
                Vector3c y = y0 + dpsi[i];
                stepper.evolve(y, delta, sf, p, w);
                // Remove the background polarization a0* b0 + D c0* b0.
                const cplx base_ab = std::conj(y0(0)) * y0(1);
                const cplx base_cb = D * std::conj(y0(2)) * y0(1);
                for (std::size_t k = 0; k <= steps; ++k) {
                    const double s = dt * static_cast<double>(k);
                    p[k] -= w * std::polar(1.0, -delta * s) * (base_ab + base_cb * std::polar(1.0, omega_r * s));
                }
                if (commit) {
                    Vector3c y0_end = y0;
                    free_evolve(y0_end, delta, omega_r, dt * static_cast<double>(steps));
                    dpsi[i] = y - y0_end;
                }
                return;
            }
            // First order: d/ds dpsi~ = (i/2) M~(Omega) psi0~, integrated by
            // Simpson's rule on the node/midpoint samples.
            const cplx half_i{0.0, 0.5};
            const cplx a0 = y0(0), b0 = y0(1), c0 = y0(2);
            cplx da = dpsi[i](0), db = dpsi[i](1), dc = dpsi[i](2);
            const cplx rot = std::polar(1.0, 0.5 * delta * dt);
            const cplx wrot = std::polar(1.0, -0.5 * omega_r * dt);
            cplx e = 1.0, wr = 1.0;
            auto source = [&](cplx omega, cplx ee, cplx ww, cplx& sa, cplx& sb, cplx& sc) {
                const cplx g = omega * ee;
                const cplx k = D * g * ww;
                sa = half_i * std::conj(g) * b0;
                sb = half_i * (g * a0 + k * c0);
                sc = half_i * std::conj(k) * b0;
            };
            auto polarization = [&](cplx ee, cplx ww) {
                // e^{-i Delta s} [a0~* db~ + da~* b0~ + D e^{i wR s} (c0~* db~ + dc~* b0~)]
                return std::conj(ee) * (std::conj(a0) * db + std::conj(da) * b0 +
                                        D * std::conj(ww) * (std::conj(c0) * db + std::conj(dc) * b0));
            };
            for (std::size_t n = 0; n < steps; ++n) {
                p[n] += w * polarization(e, wr);
                const cplx eh = e * rot, e1 = eh * rot;
                const cplx wh = wr * wrot, w1 = wh * wrot;
                cplx a1, b1, c1, ah, bh, ch, a2, b2, c2;
                source(row[n], e, wr, a1, b1, c1);
                source(mids[n], eh, wh, ah, bh, ch);
                source(row[n + 1], e1, w1, a2, b2, c2);
                da += dt / 6.0 * (a1 + 4.0 * ah + a2);
                db += dt / 6.0 * (b1 + 4.0 * bh + b2);
                dc += dt / 6.0 * (c1 + 4.0 * ch + c2);
                e = e1;
                wr = w1;
            }
            p[steps] += w * polarization(e, wr);
            if (commit) {
                const double span = dt * static_cast<double>(steps);
                dpsi[i] = Vector3c(da, db * std::polar(1.0, -delta * span), dc * std::polar(1.0, -omega_r * span));
            }
        });
    }
};

struct WindowMarch {
    std::vector<cplx> rows;      // z-major field samples
    std::vector<Vector3c> dpsi;  // perturbation at window end, z-major
};

// Heun z-march of one weak-field window.
WindowMarch march_window(const ControlPropagation& controls, WeakWindow& window, std::span<const cplx> input,
                         const std::vector<Vector3c>& psi0, std::vector<Vector3c> dpsi_start)
{
    const std::size_t nz = controls.fields[0].z.size() - 1;
    const std::size_t natoms = controls.quadrature.size();
    const std::size_t nodes = window.steps + 1;
    const double dz = controls.medium.length / static_cast<double>(nz);
    const cplx ik{0.0, controls.medium.coupling()};

    WindowMarch out;
    out.rows.assign((nz + 1) * nodes, cplx{});
    std::copy(input.begin(), input.end(), out.rows.begin());
    out.dpsi = std::move(dpsi_start);

    auto psi0_at = [&](std::size_t iz) { return std::span<const Vector3c>(psi0.data() + iz * natoms, natoms); };
    auto dpsi_at = [&](std::size_t iz) { return std::span<Vector3c>(out.dpsi.data() + iz * natoms, natoms); };
    auto row_at = [&](std::size_t iz) { return std::span<cplx>(out.rows.data() + iz * nodes, nodes); };

    std::vector<cplx> pol_n, pol_star, predicted(nodes);
    std::vector<Vector3c> scratch(natoms);
    for (std::size_t n = 0; n < nz; ++n) {
        window.run(psi0_at(n), dpsi_at(n), row_at(n), true, pol_n);
        const auto row_n = row_at(n);
        auto row_next = row_at(n + 1);
        for (std::size_t k = 0; k < nodes; ++k) {
            predicted[k] = row_n[k] + dz * ik * pol_n[k];
        }
        const auto next = dpsi_at(n + 1);
        std::copy(next.begin(), next.end(), scratch.begin());
        window.run(psi0_at(n + 1), scratch, predicted, false, pol_star);
        for (std::size_t k = 0; k < nodes; ++k) {
            row_next[k] = row_n[k] + 0.5 * dz * ik * (pol_n[k] + pol_star[k]);
        }
    }
    window.run(psi0_at(nz), dpsi_at(nz), row_at(nz), true, pol_n);
    return out;
}

struct EchoRun {
    std::vector<double> efficiency;
    std::vector<cplx> exit_field;
    double signal_energy = 0.0;
};

EchoRun run_echo(const ControlPropagation& controls, const SequenceTiming& timing, const ChirpedPulse& signal,
                 const std::vector<Propagator3>& control_maps, const EchoOptions& options, bool full)
{
    const auto& q = controls.quadrature;
    const std::size_t natoms = q.size();
    const std::size_t nz = controls.fields[0].z.size() - 1;
    const std::size_t steps = options.window_steps;
    const double dt = 2.0 * timing.T / static_cast<double>(steps);
    const double omega_r = controls.medium.omega_r;

    auto signal_phase = [&](double t) { return phase_at(signal, t); };
    const double sig_begin = timing.t0 - timing.T;
    const double echo_begin = timing.t4 - timing.T;
    const Carrier sig_carrier = make_carrier(sig_begin, dt, steps, signal_phase);
    // The echo carries the signal's mean frequency; referencing its phase to
    // t4 keeps the demodulated echo smooth.
    const Carrier echo_carrier = make_carrier(echo_begin, dt, steps, [&](double t) {
        return signal.center_detuning * (t - timing.t4);
    });

    std::vector<cplx> input(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        input[k] = field_at(signal, sig_begin + dt * static_cast<double>(k));
    }

    EchoRun run;
    run.signal_energy = trapezoid_energy(input, dt);

    // Signal window: background |1> everywhere.
    std::vector<Vector3c> psi0((nz + 1) * natoms, AtomState::ground().vector());
    WeakWindow sig_window{controls, dt, steps, full, options.workers, sig_carrier, std::vector<cplx>(steps)};
    WindowMarch sig = march_window(controls, sig_window, input, psi0,
                                   std::vector<Vector3c>((nz + 1) * natoms, Vector3c::Zero()));

    // Through the controls to the start of the echo window.
    const double gap_in = timing.t1 - timing.T_prime - (timing.t0 + timing.T);
    const double gap_out = timing.t4 - timing.T - (timing.t3 + timing.T_prime);
    std::vector<Vector3c> dpsi(sig.dpsi.size());
    for (std::size_t idx = 0; idx < dpsi.size(); ++idx) {
        const double delta = q.nodes[idx % natoms];
        Vector3c v = sig.dpsi[idx];
        free_evolve(v, delta, omega_r, gap_in);
        v = control_maps[idx] * v;
        free_evolve(v, delta, omega_r, gap_out);
        dpsi[idx] = v;
        Vector3c b = controls.final_states[idx];
        free_evolve(b, delta, omega_r, gap_out);
        psi0[idx] = b;
    }

    std::vector<cplx> zero(steps + 1, cplx{});
    WeakWindow echo_window{controls, dt, steps, full, options.workers, echo_carrier, std::vector<cplx>(steps)};
    WindowMarch echo = march_window(controls, echo_window, zero, psi0, std::move(dpsi));

    run.efficiency.resize(nz + 1);
    for (std::size_t iz = 0; iz <= nz; ++iz) {
        const std::span<const cplx> row(echo.rows.data() + iz * (steps + 1), steps + 1);
        const double e = trapezoid_energy(row, dt);
        run.efficiency[iz] = run.signal_energy > 0.0 ? e / run.signal_energy : 0.0;
    }
    run.exit_field.assign(echo.rows.end() - static_cast<std::ptrdiff_t>(steps + 1), echo.rows.end());
    return run;
}

}  // namespace

EchoResult weak_signal_echo(const ControlPropagation& controls, const ChirpedPulse& control_shape,
                            const SequenceTiming& timing_in, const ChirpedPulse& signal, const EchoOptions& options)
{
    SequenceTiming timing = timing_in;
    timing.t4 = solve_echo_time(timing);
    timing.validate();

    if (std::abs(signal.peak_amplitude) > 1e-3 * std::abs(control_shape.peak_amplitude)) {
        throw InvalidArgument("signal peak amplitude must not exceed 1e-3 of the control amplitude");
    }
    if (signal.t_center != timing.t0) {
        throw InvalidArgument("signal must be centered at t0");
    }
    signal.validate();
    const std::array<double, 3> centers{timing.t1, timing.t2, timing.t3};
    for (int j = 0; j < 3; ++j) {
        const FieldGrid& f = controls.fields[j];
        if (!f.input.same_shape(control_shape) || f.input.t_center != centers[j]) {
            throw InvalidArgument("control run does not match the pulse shape and timing");
        }
    }
    if (control_shape.half_window != timing.T_prime) {
        throw InvalidArgument("control half-window differs from T'");
    }
    if (options.window_steps < 4) {
        throw InvalidArgument("echo windows need at least four steps");
    }

    const auto& q = controls.quadrature;
    const std::size_t natoms = q.size();
    const std::size_t nz = controls.fields[0].z.size() - 1;
    const double omega_r = controls.medium.omega_r;

    // Control-window propagator at every (z, Delta node).
    std::vector<Propagator3> maps((nz + 1) * natoms);
    const double g2 = timing.t2 - timing.t1 - 2.0 * timing.T_prime;
    const double g3 = timing.t3 - timing.t2 - 2.0 * timing.T_prime;
    for (std::size_t iz = 0; iz <= nz; ++iz) {
        const auto rows = sample_rows(controls, iz);
        parallel_for(natoms, options.workers, [&](std::size_t i) {
            const AtomParams params{q.nodes[i], omega_r, controls.medium.dipole_ratio};
            const auto u = propagators_from_rows(controls, rows, q.nodes[i]);
            maps[iz * natoms + i] = u[2] * free_propagator(params, g3) * u[1] * free_propagator(params, g2) * u[0];
        });
    }

    EchoResult result;
    result.timing = timing;
    result.signal = signal;
    for (std::size_t iz = 0; iz <= nz; ++iz) {
        result.z_alpha.push_back(controls.z_alpha(iz));
    }

    const EchoRun linear = run_echo(controls, timing, signal, maps, options, false);
    result.efficiency = linear.efficiency;
    result.signal_energy = linear.signal_energy;
    result.echo_out = linear.exit_field;
    result.echo_dxi = 2.0 * timing.T / static_cast<double>(options.window_steps);
    result.echo_xi_begin = timing.t4 - timing.T;

    std::size_t peak = 0;
    for (std::size_t k = 1; k < result.echo_out.size(); ++k) {
        if (std::abs(result.echo_out[k]) > std::abs(result.echo_out[peak])) {
            peak = k;
        }
    }
    result.echo_peak_time = result.echo_xi_begin + result.echo_dxi * static_cast<double>(peak);

    if (options.check_linearity) {
        ChirpedPulse doubled = signal;
        doubled.peak_amplitude *= 2.0;
        result.efficiency_full = run_echo(controls, timing, signal, maps, options, true).efficiency.back();
        result.efficiency_full_double = run_echo(controls, timing, doubled, maps, options, true).efficiency.back();
        const double ref = std::max(result.efficiency_full, 1e-300);
        result.nonlinear = std::abs(result.efficiency_full_double - result.efficiency_full) / ref > 0.01;
    }
    return result;
}

}  // namespace chirpmem
