#include "chirpmem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chirpmem {

namespace {

// Right-hand side in the interaction picture of diag(0, -Delta, -omega_R),
// with the time origin at t_ref.
struct InteractionRhs {
    const ComplexField& field;
    double delta;
    double omega_r;
    double dipole;
    double t_ref;

    template <class M>
    void operator()(double t, const M& y, M& dy) const
    {
        const double s = t - t_ref;
        const cplx g = field(t) * std::polar(1.0, delta * s);
        const cplx k = g * std::polar(1.0, -omega_r * s);
        const cplx half_i{0.0, 0.5};
        dy.row(0) = half_i * std::conj(g) * y.row(1);
        dy.row(1) = half_i * (g * y.row(0) + (dipole * k) * y.row(2));
        dy.row(2) = half_i * (dipole * std::conj(k)) * y.row(1);
    }
};

template <class M>
double scaled_error(const M& err, const M& y0, const M& y1, double rtol, double atol)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < err.cols(); ++j) {
        for (Eigen::Index i = 0; i < err.rows(); ++i) {
            const double scale = atol + rtol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
            worst = std::max(worst, std::abs(err(i, j)) / scale);
        }
    }
    return worst;
}

// Dormand-Prince 5(4) with first-same-as-last and a plain I-controller.
template <class M, class Rhs>
void dopri5(M& y, double t0, double t1, const Rhs& f, const IntegratorOptions& opt)
{
    const double span = t1 - t0;
    if (span == 0.0) {
        return;
    }
    const double h_max = opt.max_step > 0.0 ? opt.max_step : span / 64.0;
    const double h_min = 1e-13 * std::max({1.0, std::abs(t0), std::abs(t1)});

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    M k1, k2, k3, k4, k5, k6, k7, ynew, err;
    double t = t0;
    double h = std::min(h_max, std::max(h_min * 10.0, 1e-3 * span));
    f(t, y, k1);

    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > opt.max_steps) {
            std::ostringstream msg;
            msg << "integration exceeded " << opt.max_steps << " steps at t=" << t;
            throw IntegrationError(msg.str());
        }
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }
        f(t + c2 * h, M(y + h * (a21 * k1)), k2);
        f(t + c3 * h, M(y + h * (a31 * k1 + a32 * k2)), k3);
        f(t + c4 * h, M(y + h * (a41 * k1 + a42 * k2 + a43 * k3)), k4);
        f(t + c5 * h, M(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)), k5);
        f(t + h, M(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)), k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double e = scaled_error(err, y, ynew, opt.rel_tol, opt.abs_tol);
        if (e <= 1.0 || h <= h_min) {
            if (e > 1.0) {
                std::ostringstream msg;
                msg << "step size underflow at t=" << t << " (error ratio " << e << ")";
                throw IntegrationError(msg.str());
            }
            t = last ? t1 : t + h;
            y = ynew;
            k1 = k7;
        }
        const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
        h = std::clamp(h * factor, h_min, h_max);
    }
}

template <class M>
void integrate_impl(M& y, const AtomParams& params, const ComplexField& field, double t_start,
                    double t_end, const IntegratorOptions& opt)
{
    if (!(t_end >= t_start)) {
        throw InvalidArgument("integration requires t_end >= t_start");
    }
    if (opt.fixed_steps > 0) {
        const std::size_t n = opt.fixed_steps;
        const double dt = (t_end - t_start) / static_cast<double>(n);
        std::vector<cplx> nodes(n + 1), mids(n);
        for (std::size_t k = 0; k <= n; ++k) {
            nodes[k] = field(t_start + dt * static_cast<double>(k));
        }
        for (std::size_t k = 0; k < n; ++k) {
            mids[k] = field(t_start + dt * (static_cast<double>(k) + 0.5));
        }
        FixedStepStepper stepper(params.omega_r, params.dipole_ratio, dt, n);
        stepper.evolve(y, params.detuning, SampledField{dt, nodes, mids});
        return;
    }
    InteractionRhs rhs{field, params.detuning, params.omega_r, params.dipole_ratio, t_start};
    dopri5(y, t_start, t_end, rhs, opt);
    const double span = t_end - t_start;
    y.row(1) *= std::polar(1.0, -params.detuning * span);
    y.row(2) *= std::polar(1.0, -params.omega_r * span);
}

}  // namespace

AtomState AtomState::basis(int level)
{
    if (level < 1 || level > 3) {
        throw InvalidArgument("basis level must be 1, 2 or 3");
    }
    AtomState s{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    (level == 1 ? s.a : level == 2 ? s.b : s.c) = 1.0;
    return s;
}

FixedStepStepper::FixedStepStepper(double omega_r, double dipole_ratio, double dt, std::size_t steps)
    : omega_r_(omega_r), dipole_(dipole_ratio), dt_(dt), steps_(steps), omega_phase_(2 * steps + 1)
{
    for (std::size_t k = 0; k < omega_phase_.size(); ++k) {
        omega_phase_[k] = std::polar(1.0, -omega_r * 0.5 * dt * static_cast<double>(k));
    }
}

void FixedStepStepper::evolve(Vector3c& y, double delta, const SampledField& field, cplx* polarization,
                              double weight) const
{
    const cplx half_i{0.0, 0.5};
    const double D = dipole_;
    const double h = dt_;
    const double h2 = 0.5 * dt_;
    const double h6 = dt_ / 6.0;
    cplx a = y(0), b = y(1), c = y(2);

    const cplx rot = std::polar(1.0, 0.5 * delta * h);
    cplx e0{1.0, 0.0};

    for (std::size_t n = 0; n < steps_; ++n) {
        const cplx w0 = omega_phase_[2 * n];
        const cplx wh = omega_phase_[2 * n + 1];
        const cplx w1 = omega_phase_[2 * n + 2];
        const cplx eh = e0 * rot;
        const cplx e1 = eh * rot;

        if (polarization != nullptr) {
            polarization[n] += weight * std::conj(e0) * b * (std::conj(a) + D * std::conj(c) * std::conj(w0));
        }

        const cplx g0 = field.nodes[n] * e0;
        const cplx gh = field.mids[n] * eh;
        const cplx g1 = field.nodes[n + 1] * e1;
        const cplx k0 = D * g0 * w0;
        const cplx kh = D * gh * wh;
        const cplx k1 = D * g1 * w1;
        const cplx cg0 = half_i * std::conj(g0), cgh = half_i * std::conj(gh), cg1 = half_i * std::conj(g1);
        const cplx ck0 = half_i * std::conj(k0), ckh = half_i * std::conj(kh), ck1 = half_i * std::conj(k1);
        const cplx ig0 = half_i * g0, igh = half_i * gh, ig1 = half_i * g1;
        const cplx ik0 = half_i * k0, ikh = half_i * kh, ik1 = half_i * k1;

        const cplx da1 = cg0 * b, db1 = ig0 * a + ik0 * c, dc1 = ck0 * b;
        cplx ta = a + h2 * da1, tb = b + h2 * db1, tc = c + h2 * dc1;
        const cplx da2 = cgh * tb, db2 = igh * ta + ikh * tc, dc2 = ckh * tb;
        ta = a + h2 * da2, tb = b + h2 * db2, tc = c + h2 * dc2;
        const cplx da3 = cgh * tb, db3 = igh * ta + ikh * tc, dc3 = ckh * tb;
        ta = a + h * da3, tb = b + h * db3, tc = c + h * dc3;
        const cplx da4 = cg1 * tb, db4 = ig1 * ta + ik1 * tc, dc4 = ck1 * tb;

        a += h6 * (da1 + 2.0 * (da2 + da3) + da4);
        b += h6 * (db1 + 2.0 * (db2 + db3) + db4);
        c += h6 * (dc1 + 2.0 * (dc2 + dc3) + dc4);
        e0 = e1;
    }

    if (polarization != nullptr) {
        const cplx wl = omega_phase_[2 * steps_];
        polarization[steps_] += weight * std::conj(e0) * b * (std::conj(a) + D * std::conj(c) * std::conj(wl));
    }

    const double span = h * static_cast<double>(steps_);
    y(0) = a;
    y(1) = b * std::polar(1.0, -delta * span);
    y(2) = c * std::polar(1.0, -omega_r_ * span);
}

void FixedStepStepper::evolve(Propagator3& u, double delta, const SampledField& field) const
{
    for (int j = 0; j < 3; ++j) {
        Vector3c col = u.col(j);
        evolve(col, delta, field);
        u.col(j) = col;
    }
}

AtomState integrate_state(const AtomState& state, const AtomParams& params, const ComplexField& field,
                          double t_start, double t_end, const IntegratorOptions& options)
{
    Eigen::Matrix<cplx, 3, 1> y = state.vector();
    integrate_impl(y, params, field, t_start, t_end, options);
    return AtomState::from(y);
}

Propagator3 propagator(const AtomParams& params, const ComplexField& field, double t_start, double t_end,
                       const IntegratorOptions& options)
{
    Eigen::Matrix<cplx, 3, 3> u = Propagator3::Identity();
    integrate_impl(u, params, field, t_start, t_end, options);
    return u;
}

Propagator3 pulse_propagator(const AtomParams& params, const ChirpedPulse& pulse, const IntegratorOptions& options)
{
    return propagator(params, as_field(pulse), pulse.window_begin(), pulse.window_end(), options);
}

Propagator3 free_propagator(const AtomParams& params, double dt)
{
    if (!(dt >= 0.0)) {
        throw InvalidArgument("free evolution needs dt >= 0");
    }
    Propagator3 u = Propagator3::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, -params.detuning * dt);
    u(2, 2) = std::polar(1.0, -params.omega_r * dt);
    return u;
}

double unitarity_defect(const Propagator3& u)
{
    return (u.adjoint() * u - Propagator3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace chirpmem
