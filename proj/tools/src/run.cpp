#include "chirpmem_cli/run.hpp"

#include "chirpmem_cli/materials.hpp"

#include <chirpmem/adiabatic.hpp>
#include <chirpmem/dynamics.hpp>
#include <chirpmem/ensemble.hpp>
#include <chirpmem/maxwell.hpp>
#include <chirpmem/phasematch.hpp>
#include <chirpmem/sequence.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace chirpmem::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class Csv {
public:
    Csv(const fs::path& path, const std::string& title, const std::vector<std::string>& units,
        const std::string& header)
        : out_(path)
    {
        if (!out_) {
            throw std::runtime_error("cannot write " + path.string());
        }
        out_ << "# " << title << "\n";
        for (const auto& u : units) {
            out_ << "# " << u << "\n";
        }
        out_ << header << "\n";
    }

    void row(std::initializer_list<double> values)
    {
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << format_double(v);
            first = false;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

double wrap_pi(double x)
{
    return std::remainder(x, 2.0 * std::numbers::pi);
}

ChirpedPulse pulse_from(const RunConfig& c)
{
    auto p = ChirpedPulse::make(c.pulse.amplitude, c.pulse.tau_p, c.pulse.delta0,
                                c.pulse.chirp_range * c.pulse.tau_p);
    p.half_window = c.pulse.half_window;
    return p;
}

AtomParams atom_from(const RunConfig& c)
{
    return {c.atom.delta, c.atom.omega_r, c.atom.dipole_ratio};
}

SequenceTiming timing_from(const RunConfig& c)
{
    SequenceTiming t;
    t.t0 = c.timing.t0;
    t.t1 = c.timing.t1;
    t.t2 = c.timing.t2;
    t.t3 = c.timing.t3;
    t.T = c.timing.T;
    t.T_prime = c.pulse.half_window;
    t.chirp_sign = c.pulse.chirp_range < 0.0 ? ChirpSign::negative : ChirpSign::positive;
    t.t4 = c.timing.t4 ? *c.timing.t4 : solve_echo_time(t);
    return t;
}

MediumSpec medium_from(const RunConfig& c)
{
    MediumSpec m;
    m.alpha_d = c.medium.alpha_d;
    m.dipole_ratio = c.atom.dipole_ratio;
    m.omega_r = c.atom.omega_r;
    m.spectrum = c.medium.spectrum == "uniform" ? SpectralDistribution::uniform(c.medium.lo, c.medium.hi)
                                                : SpectralDistribution::gaussian(c.medium.sigma);
    m.length = c.medium.length;
    return m;
}

IntegratorOptions integrator_from(const RunConfig& c)
{
    auto o = IntegratorOptions::with_tolerance(c.scan.rel_tol);
    o.max_steps = c.scan.max_steps;
    return o;
}

PropagationOptions propagation_from(const RunConfig& c, unsigned workers)
{
    PropagationOptions o;
    o.grid.z_steps = c.grid.z_steps;
    o.grid.time_steps = c.grid.time_steps;
    o.grid.delta_nodes = c.grid.delta_nodes;
    o.grid.delta_panels = c.grid.delta_panels;
    o.check_resolution = c.grid.check_resolution;
    o.workers = workers;
    return o;
}

json window_json(const SpectralWindow& w)
{
    return {{"lo", w.lo}, {"hi", w.hi}, {"empty", w.empty()}};
}

// z rows written for slices: every stride-th plus the exit face
std::vector<std::size_t> slice_rows(std::size_t z_steps, std::size_t stride)
{
    std::vector<std::size_t> rows;
    for (std::size_t iz = 0; iz <= z_steps; iz += stride) {
        rows.push_back(iz);
    }
    if (rows.back() != z_steps) {
        rows.push_back(z_steps);
    }
    return rows;
}

struct Context {
    const RunConfig& cfg;
    fs::path dir;
    unsigned workers;
    std::ostream& out;
    json summary;
};

void pulse_scan(Context& ctx)
{
    const auto& c = ctx.cfg;
    const auto p = pulse_from(c);
    const auto at = atom_from(c);

    Csv eig(ctx.dir / "eigenvalues.csv", "pulse-scan: instantaneous adiabatic eigenvalues",
            {"t_us [us], lambda_* [rad/us]"}, "t_us,lambda_minus,lambda_zero,lambda_plus");
    const std::size_t samples = 801;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = p.window_begin() + (p.window_end() - p.window_begin()) * k / (samples - 1);
        const auto env = envelope_at(p, t);
        const auto f = instantaneous_eigensystem(env.amplitude, env.inst_detuning - at.detuning, at.omega_r,
                                                 at.dipole_ratio);
        eig.row({t, f.minus(), f.zero(), f.plus()});
    }

    const auto opts = integrator_from(c);
    const Propagator3 u = pulse_propagator(at, p, opts);
    ctx.summary["p_joint"] = joint_probability(u, p.chirp_sign());
    ctx.summary["unitarity_defect"] = unitarity_defect(u);
    ctx.summary["rephasable_window"] = window_json(rephasable_window(p, at.omega_r));

    const auto taus = c.scan.tau_points > 1 ? linspace(c.scan.tau_lo, c.scan.tau_hi, c.scan.tau_points)
                                            : std::vector<double>{c.scan.tau_lo};
    auto ranges = c.scan.chirp_points > 1 ? linspace(c.scan.chirp_lo, c.scan.chirp_hi, c.scan.chirp_points)
                                          : std::vector<double>{c.scan.chirp_lo};
    for (double& r : ranges) {
        r *= c.atom.omega_r;
    }
    const auto map = joint_probability_map(taus, ranges, c.atom.omega_r, opts, ctx.workers);
    Csv csv(ctx.dir / "joint_map.csv", "pulse-scan: joint permutation probability at Delta = 0, D = 1",
            {"tau_p_us [us], mu [dimensionless chirp, sweep mu/tau_p in rad/us], p_joint [probability]",
             "A0 = 20/tau_p, delta0 = -omega_R/2, omega_R = " + format_double(c.atom.omega_r) + " rad/us"},
            "tau_p_us,mu,p_joint");
    double best = 0.0;
    for (const auto& pt : map) {
        csv.row({pt.tau_p, pt.mu, pt.p_joint});
        best = std::max(best, pt.p_joint);
    }
    ctx.summary["map_points"] = map.size();
    ctx.summary["map_max_p_joint"] = best;
    ctx.out << "P_joint = " << std::setprecision(6) << ctx.summary["p_joint"].get<double>() << "\n";
}

void ensemble_scan(Context& ctx)
{
    const auto& c = ctx.cfg;
    const auto p = pulse_from(c);
    const auto grid = linspace(c.scan.delta_lo, c.scan.delta_hi, c.scan.delta_points);
    const std::array<double, 3> centers{c.timing.t1, c.timing.t2, c.timing.t3};
    const auto rows = final_populations_scan(p, centers, atom_from(c), grid,
                                             integrator_from(c), ctx.workers);

    Csv csv(ctx.dir / "populations.csv", "ensemble-scan: final populations after three control pulses",
            {"delta_mhz [rad/us, angular], p1,p2,p3 [probability]"}, "delta_mhz,p1,p2,p3");
    std::size_t failed = 0;
    double sum_defect = 0.0;
    for (const auto& r : rows) {
        csv.row({r.delta, r.p1, r.p2, r.p3});
        if (!r.ok) {
            ++failed;
        } else {
            sum_defect = std::max(sum_defect, std::abs(r.p1 + r.p2 + r.p3 - 1.0));
        }
    }

    // P1 = 1/2 crossings found walking outward from the sample nearest 0
    std::size_t i0 = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i].delta) < std::abs(rows[i0].delta)) {
            i0 = i;
        }
    }
    auto crossing = [&](int dir) -> double {
        for (std::size_t i = i0;; i += dir) {
            const std::size_t j = i + dir;
            if (j >= rows.size()) {
                return NAN;
            }
            if (rows[i].p1 >= 0.5 && rows[j].p1 < 0.5) {
                const double s = (rows[i].p1 - 0.5) / (rows[i].p1 - rows[j].p1);
                return rows[i].delta + s * (rows[j].delta - rows[i].delta);
            }
        }
    };
    ctx.summary["p1_center"] = rows[i0].p1;
    ctx.summary["delta_center"] = rows[i0].delta;
    ctx.summary["p1_half_crossing_lo"] = crossing(-1);
    ctx.summary["p1_half_crossing_hi"] = crossing(+1);
    ctx.summary["failed_rows"] = failed;
    ctx.summary["max_population_sum_defect"] = sum_defect;
    ctx.summary["rephasable_window"] = window_json(rephasable_window(p, c.atom.omega_r));
    ctx.summary["bandwidth_margin"] = bandwidth_margin(p, c.atom.omega_r, c.medium.sigma_s);
}

void sequence_check(Context& ctx)
{
    const auto& c = ctx.cfg;
    const auto p = pulse_from(c);
    const auto timing = timing_from(c);
    timing.validate();
    const double residual = rephasing_residual(timing);
    const double scale = std::max({1.0, std::abs(timing.t0), std::abs(timing.t4)});
    const bool rephased = std::abs(residual) <= 1e-9 * scale;
    ctx.summary["t4"] = timing.t4;
    ctx.summary["residual"] = residual;
    ctx.summary["rephased"] = rephased;
    ctx.out << "t4 = " << format_double(timing.t4) << ", residual = " << format_double(residual)
            << (rephased ? " (rephased)" : " (not rephased)") << "\n";

    const auto window = rephasable_window(p, c.atom.omega_r);
    ctx.summary["rephasable_window"] = window_json(window);
    if (window.empty()) {
        ctx.out << "rephasable window is empty; no coherence scan\n";
        return;
    }
    const double half = 0.5 * window.width() * c.scan.window_fraction;
    const auto grid = linspace(window.center() - half, window.center() + half, c.scan.delta_points);
    const auto mode = c.scan.mode == "adiabatic" ? PropagatorMode::adiabatic : PropagatorMode::numeric;
    const auto train = PulseTrain::identical(p, timing);
    const auto rows = coherence_phase_scan(train, timing, c.atom.omega_r, c.atom.dipole_ratio, grid, mode,
                                           integrator_from(c), ctx.workers);

    Csv csv(ctx.dir / "coherence.csv", "sequence-check: a* b transfer factor between t0+T and t4-T",
            {"delta [rad/us], re_factor,im_factor [dimensionless], phase_unwrapped [rad]"},
            "delta,re_factor,im_factor,phase_unwrapped");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, min_mod = INFINITY;
    for (const auto& r : rows) {
        csv.row({r.delta, r.factor.real(), r.factor.imag(), r.phase_unwrapped});
        sx += r.delta;
        sy += r.phase_unwrapped;
        sxx += r.delta * r.delta;
        sxy += r.delta * r.phase_unwrapped;
        min_mod = std::min(min_mod, std::abs(r.factor));
    }
    const double n = static_cast<double>(rows.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double deviation = 0.0;
    for (const auto& r : rows) {
        deviation = std::max(deviation, std::abs(r.phase_unwrapped - intercept - slope * r.delta));
    }
    ctx.summary["mode"] = c.scan.mode;
    ctx.summary["fit_slope"] = slope;
    ctx.summary["predicted_slope"] = 2.0 * timing.T - residual;
    ctx.summary["fit_constant_minus_predicted"] =
        wrap_pi(intercept - global_rephasing_phase(timing, c.atom.omega_r));
    ctx.summary["max_line_deviation"] = deviation;
    ctx.summary["min_abs_factor"] = min_mod;
    ctx.summary["identical_pulses"] = train.identical();
}

void phasematch(Context& ctx)
{
    const auto& c = ctx.cfg;
    const auto ws = geometry_preset(c.phasematch.geometry, c.phasematch.k, c.phasematch.length);
    const auto sign = c.pulse.chirp_range < 0.0 ? ChirpSign::negative : ChirpSign::positive;
    const auto verdicts = echo_verdicts(ws, sign, c.phasematch.threshold, c.atom.omega_r);

    Csv csv(ctx.dir / "verdicts.csv", "phasematch: echo wavevectors for geometry " + c.phasematch.geometry,
            {"k_x,k_y,k_z [rad/mm], ratio = |k_e|/k_s, mismatch_over_pi = | |k_e| - k_s | L / pi, "
             "silenced [0/1], L = " + format_double(c.phasematch.length) + " mm"},
            "stage,k_x,k_y,k_z,ratio,mismatch_over_pi,silenced");
    ctx.out << "stage        k_e/k_s (x, y, z)          |k_e|/k_s   mismatch*L/pi  silenced\n";
    json list = json::array();
    for (const auto& v : verdicts) {
        csv.row({double(v.stage), v.k_e.x(), v.k_e.y(), v.k_e.z(), v.ratio, v.mismatch_over_pi,
                 v.silenced ? 1.0 : 0.0});
        const Vector3r unit = v.k_e / c.phasematch.k;
        ctx.out << std::setw(5) << v.stage << "   (" << std::setw(7) << std::fixed << std::setprecision(3)
                << unit.x() << ", " << std::setw(7) << unit.y() << ", " << std::setw(7) << unit.z() << ")  "
                << std::setw(9) << v.ratio << "   " << std::setw(12) << std::setprecision(4) << std::scientific
                << v.mismatch_over_pi << "  " << (v.silenced ? "yes" : "no") << "\n"
                << std::defaultfloat;
        list.push_back({{"stage", v.stage},
                        {"k_e_over_ks", {unit.x(), unit.y(), unit.z()}},
                        {"ratio", v.ratio},
                        {"mismatch_over_pi", v.mismatch_over_pi},
                        {"silenced", v.silenced}});
    }
    ctx.summary["geometry"] = c.phasematch.geometry;
    ctx.summary["chirp_sign"] = sign == ChirpSign::negative ? "negative" : "positive";
    ctx.summary["verdicts"] = list;
}

ControlPropagation run_controls(Context& ctx)
{
    const auto& c = ctx.cfg;
    return propagate_controls(medium_from(c), pulse_from(c), {c.timing.t1, c.timing.t2, c.timing.t3},
                              propagation_from(c, ctx.workers));
}

void control_summary(Context& ctx, const ControlPropagation& ctl)
{
    const std::size_t last = ctl.grid.z_steps;
    json pulses = json::array();
    for (const auto& f : ctl.fields) {
        pulses.push_back({{"pulse", f.pulse_index},
                          {"peak_in", f.peak(0)},
                          {"peak_out", f.peak(last)},
                          {"energy_in", f.energy(0)},
                          {"energy_out", f.energy(last)}});
    }
    ctx.summary["alpha_d_L"] = ctl.z_alpha(last);
    ctx.summary["pulses"] = pulses;
    ctx.summary["max_norm_defect"] = ctl.max_norm_defect;
    ctx.summary["resolution_checked"] = !ctl.resolution_change.empty();
    ctx.summary["resolution_change"] = ctl.resolution_change;
    ctx.summary["resolution_ok"] = ctl.resolution_ok;
    if (!ctl.resolution_ok) {
        ctx.out << "warning: halving the time step changes an output energy by more than 1%\n";
    }
}

void propagate(Context& ctx)
{
    const auto ctl = run_controls(ctx);
    Csv csv(ctx.dir / "fields.csv", "propagate: control field slices in the retarded frame",
            {"z_alpha [alpha_d z, dimensionless optical depth], xi_us [us], re_omega,im_omega [rad/us], "
             "pulse_index [1..3]"},
            "z_alpha,xi_us,re_omega,im_omega,pulse_index");
    for (const auto& f : ctl.fields) {
        for (std::size_t iz : slice_rows(ctl.grid.z_steps, ctx.cfg.grid.z_stride)) {
            const auto row = f.row(iz);
            for (std::size_t k = 0; k < row.size(); k += ctx.cfg.grid.xi_stride) {
                csv.row({ctl.z_alpha(iz), f.xi(k), row[k].real(), row[k].imag(), double(f.pulse_index)});
            }
        }
    }
    control_summary(ctx, ctl);
}

void rephasing(Context& ctx)
{
    const auto& c = ctx.cfg;
    const auto ctl = run_controls(ctx);
    const auto grid = linspace(c.map.delta_lo, c.map.delta_hi, c.map.delta_points);
    const auto map = rephasing_map(ctl, grid, c.grid.z_stride, ctx.workers);

    Csv csv(ctx.dir / "map.csv", "rephasing-map: R = conj(R1) R2 from the propagated controls",
            {"delta_mhz [rad/us, angular], z_alpha [alpha_d z], abs_r2 [probability], arg_r [rad]"},
            "delta_mhz,z_alpha,abs_r2,arg_r");
    for (std::size_t i = 0; i < map.deltas.size(); ++i) {
        for (std::size_t j = 0; j < map.z_index.size(); ++j) {
            const cplx r = map.at(i, j);
            csv.row({map.deltas[i], map.z_alpha[j], std::norm(r), std::arg(r)});
        }
    }

    // central band |Delta| <= sigma_s
    json slices = json::array();
    for (std::size_t j = 0; j < map.z_index.size(); ++j) {
        double lo = INFINITY, hi = -INFINITY, amin = INFINITY, amax = -INFINITY;
        for (std::size_t i = 0; i < map.deltas.size(); ++i) {
            if (std::abs(map.deltas[i]) > c.medium.sigma_s) {
                continue;
            }
            const cplx r = map.at(i, j);
            lo = std::min(lo, std::norm(r));
            hi = std::max(hi, std::norm(r));
            amin = std::min(amin, std::arg(r));
            amax = std::max(amax, std::arg(r));
        }
        slices.push_back({{"z_alpha", map.z_alpha[j]},
                          {"central_min_abs_r2", lo},
                          {"central_max_abs_r2", hi},
                          {"central_arg_spread", amax - amin}});
    }
    control_summary(ctx, ctl);
    ctx.summary["central_half_width"] = c.medium.sigma_s;
    ctx.summary["slices"] = slices;
}

void echo(Context& ctx)
{
    const auto& c = ctx.cfg;
    RunConfig solved = c;
    solved.timing.t4.reset();
    auto timing = timing_from(solved);
    const auto ctl = run_controls(ctx);

    auto signal = ChirpedPulse::make(c.echo.signal_amplitude, c.echo.signal_tau, 0.0, 0.0, c.timing.t0);
    signal.half_window = c.timing.T;
    EchoOptions eo;
    eo.window_steps = c.echo.window_steps;
    eo.check_linearity = c.echo.check_linearity;
    eo.workers = ctx.workers;
    const auto r = weak_signal_echo(ctl, pulse_from(c), timing, signal, eo);

    Csv eff(ctx.dir / "efficiency.csv", "echo: echo energy / signal energy versus medium depth",
            {"z_alpha [alpha_d L], efficiency [dimensionless energy ratio]"}, "z_alpha,efficiency");
    for (std::size_t i = 0; i < r.z_alpha.size(); ++i) {
        eff.row({r.z_alpha[i], r.efficiency[i]});
    }
    Csv wave(ctx.dir / "echo.csv", "echo: emitted field at the exit face",
             {"xi_us [us], re_omega,im_omega [rad/us]"}, "xi_us,re_omega,im_omega");
    for (std::size_t k = 0; k < r.echo_out.size(); ++k) {
        wave.row({r.echo_xi_begin + r.echo_dxi * double(k), r.echo_out[k].real(), r.echo_out[k].imag()});
    }

    json lengths = json::array();
    double best_l = NAN, best = -1.0;
    for (double l : c.echo.lengths) {
        const double e = r.efficiency_at(l);
        lengths.push_back({{"alpha_d_L", l}, {"efficiency", e}});
        if (e > best) {
            best = e;
            best_l = l;
        }
    }
    ctx.summary["t4"] = r.timing.t4;
    ctx.summary["echo_peak_time"] = r.echo_peak_time;
    ctx.summary["signal_energy"] = r.signal_energy;
    ctx.summary["efficiency"] = lengths;
    ctx.summary["best_alpha_d_L"] = best_l;
    if (c.echo.check_linearity) {
        ctx.summary["efficiency_full"] = r.efficiency_full;
        ctx.summary["efficiency_full_double"] = r.efficiency_full_double;
        ctx.summary["nonlinear"] = r.nonlinear;
    }
    control_summary(ctx, ctl);
    ctx.out << "t4 = " << format_double(r.timing.t4) << ", echo peak at " << format_double(r.echo_peak_time)
            << ", best alpha_d L = " << format_double(best_l) << "\n";
}

}  // namespace

void apply_preset(RunConfig& config, const std::string& name)
{
    if (is_material_preset(name)) {
        const auto& m = material_preset(name);
        const auto p = suggested_pulse(m);
        config.material.preset = name;
        config.atom.omega_r = m.omega_r;
        config.atom.dipole_ratio = m.dipole_ratio;
        config.pulse.amplitude = p.peak_amplitude;
        config.pulse.tau_p = p.duration;
        config.pulse.delta0 = p.center_detuning;
        config.pulse.chirp_range = p.chirp_range();
        config.pulse.half_window = p.half_window;
        return;
    }
    const auto geometries = geometry_preset_names();
    if (std::find(geometries.begin(), geometries.end(), name) != geometries.end()) {
        config.phasematch.geometry = name;
        if (name == "backward_positive" && config.pulse.chirp_range < 0.0) {
            config.pulse.chirp_range = -config.pulse.chirp_range;
            config.pulse.delta0 = -config.pulse.delta0 - config.atom.omega_r;
        } else if (name == "backward_negative" && config.pulse.chirp_range > 0.0) {
            config.pulse.chirp_range = -config.pulse.chirp_range;
            config.pulse.delta0 = -config.pulse.delta0 - config.atom.omega_r;
        }
        return;
    }
    throw ConfigError("--preset: unknown preset '" + name + "'");
}

int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err)
{
    const std::string who = "chirpmem " + config.scenario + ": ";
    try {
        config.validate();
        fs::create_directories(options.out_dir);
        Context ctx{config, fs::path(options.out_dir), std::max(1u, options.workers), out, json::object()};
        ctx.summary["scenario"] = config.scenario;
        if (!config.material.preset.empty()) {
            const auto& m = material_preset(config.material.preset);
            const auto rep = validate_material(m, pulse_from(config));
            json lines = json::array();
            for (const auto& l : rep.lines) {
                lines.push_back({{"offset", l.offset}, {"clearance", l.clearance}});
            }
            ctx.summary["material"] = {{"preset", m.name},
                                       {"omega_r", m.omega_r},
                                       {"sweep", {rep.sweep_lo, rep.sweep_hi}},
                                       {"unwanted", lines},
                                       {"sweep_clear", rep.sweep_clear},
                                       {"nearest_unwanted", rep.nearest_unwanted},
                                       {"crossing_window", window_json(rep.crossing_window)},
                                       {"rephasable", window_json(rep.rephasable)}};
        }

        if (config.scenario == "pulse-scan") {
            pulse_scan(ctx);
        } else if (config.scenario == "ensemble-scan") {
            ensemble_scan(ctx);
        } else if (config.scenario == "sequence-check") {
            sequence_check(ctx);
        } else if (config.scenario == "phasematch") {
            phasematch(ctx);
        } else if (config.scenario == "propagate") {
            propagate(ctx);
        } else if (config.scenario == "rephasing-map") {
            rephasing(ctx);
        } else {
            echo(ctx);
        }

        std::ofstream(ctx.dir / "summary.json") << ctx.summary.dump(2) << "\n";
        std::ofstream(ctx.dir / "manifest.toml")
            << "# chirpmem run manifest; reload with --config to reproduce this run\n"
            << "# units: frequencies rad/us (angular MHz), times us, phasematch lengths mm\n"
            << config.to_text();
        return exit_ok;
    } catch (const ConfigError& e) {
        err << who << e.what() << "\n";
        return exit_validation;
    } catch (const InvalidArgument& e) {
        err << who << e.what() << "\n";
        return exit_validation;
    } catch (const EchoInsidePulse& e) {
        err << who << e.what() << "\n";
        return exit_validation;
    } catch (const NotAdiabaticWindow& e) {
        err << who << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << who << "solver failure: " << e.what() << "\n";
        return exit_solver;
    }
}

}  // namespace chirpmem::cli
