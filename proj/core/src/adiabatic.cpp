#include "chirpmem/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace chirpmem {

namespace {

struct Tridiagonal {
    double d0, d1, d2;  // diagonal
    double e01, e12;    // off-diagonal
};

Tridiagonal chirped_frame_matrix(double amplitude, double delta, double omega_r, double dipole)
{
    return {0.0, delta, -omega_r, 0.5 * amplitude, 0.5 * dipole * amplitude};
}

// det(H - x I) and its derivative.
double char_poly(const Tridiagonal& h, double x)
{
    return (h.d0 - x) * ((h.d1 - x) * (h.d2 - x) - h.e12 * h.e12) - h.e01 * h.e01 * (h.d2 - x);
}

double char_poly_derivative(const Tridiagonal& h, double x)
{
    return -((h.d1 - x) * (h.d2 - x) - h.e12 * h.e12) - (h.d0 - x) * ((h.d1 - x) + (h.d2 - x)) +
           h.e01 * h.e01;
}

// Trigonometric solution of the symmetric cubic, ascending order.
std::array<double, 3> cubic_eigenvalues(const Tridiagonal& h)
{
    const double q = (h.d0 + h.d1 + h.d2) / 3.0;
    const double a0 = h.d0 - q, a1 = h.d1 - q, a2 = h.d2 - q;
    const double off = h.e01 * h.e01 + h.e12 * h.e12;
    if (off == 0.0) {
        std::array<double, 3> d{h.d0, h.d1, h.d2};
        std::sort(d.begin(), d.end());
        return d;
    }
    const double p = std::sqrt((a0 * a0 + a1 * a1 + a2 * a2 + 2.0 * off) / 6.0);
    if (p == 0.0) {
        return {q, q, q};
    }
    // det(B) / 2 with B = (H - q I) / p
    const double det = a0 * (a1 * a2 - h.e12 * h.e12) - h.e01 * h.e01 * a2;
    const double r = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double hi = q + 2.0 * p * std::cos(phi);
    const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double mid = 3.0 * q - hi - lo;
    return {lo, mid, hi};
}

double newton_polish(const Tridiagonal& h, double x, double gap)
{
    const double dp = char_poly_derivative(h, x);
    if (dp == 0.0) {
        return x;
    }
    const double step = char_poly(h, x) / dp;
    if (!std::isfinite(step) || std::abs(step) > 0.25 * gap) {
        return x;
    }
    const double y = x - step;
    return std::abs(char_poly(h, y)) <= std::abs(char_poly(h, x)) ? y : x;
}

Vector3r null_vector(const Tridiagonal& h, double x)
{
    const Vector3r r0(h.d0 - x, h.e01, 0.0);
    const Vector3r r1(h.e01, h.d1 - x, h.e12);
    const Vector3r r2(0.0, h.e12, h.d2 - x);
    const Vector3r c01 = r0.cross(r1);
    const Vector3r c02 = r0.cross(r2);
    const Vector3r c12 = r1.cross(r2);
    const double n01 = c01.squaredNorm(), n02 = c02.squaredNorm(), n12 = c12.squaredNorm();
    Vector3r v = n01 >= n02 && n01 >= n12 ? c01 : (n02 >= n12 ? c02 : c12);
    const double n = v.norm();
    return n > 0.0 ? Vector3r(v / n) : Vector3r::Zero();
}

void canonical_sign(Vector3r& v)
{
    Eigen::Index i = 0;
    v.cwiseAbs().maxCoeff(&i);
    if (v(i) < 0.0) {
        v = -v;
    }
}

double delta_at(const ChirpedPulse& pulse, double detuning, double t)
{
    return envelope_at(pulse, t).inst_detuning - detuning;
}

// Times inside (a, b) where the diabatic lines cross: delta(t) = 0 or -omega_R.
std::vector<double> crossing_times(const ChirpedPulse& pulse, const AtomParams& params)
{
    std::vector<double> out;
    const double range = pulse.chirp_range();
    if (range == 0.0) {
        return out;
    }
    for (double level : {0.0, -params.omega_r}) {
        // delta0 + range tanh(x) - Delta = level
        const double th = (level + params.detuning - pulse.center_detuning) / range;
        if (std::abs(th) < 1.0) {
            const double t = pulse.t_center + pulse.duration * std::atanh(th);
            if (t > pulse.window_begin() && t < pulse.window_end()) {
                out.push_back(t);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Basis index a tracked eigenvector reduces to at a window edge, with sign.
std::pair<int, double> nearest_basis(const Vector3r& v)
{
    Eigen::Index i = 0;
    v.cwiseAbs().maxCoeff(&i);
    return {static_cast<int>(i), v(i) < 0.0 ? -1.0 : 1.0};
}

}  // namespace

AdiabaticFrame instantaneous_eigensystem(double amplitude, double delta, double omega_r, double dipole_ratio)
{
    if (!(omega_r > 0.0)) {
        throw InvalidArgument("omega_R must be positive");
    }
    if (!(amplitude >= 0.0)) {
        throw InvalidArgument("amplitude must be non-negative");
    }
    const Tridiagonal h = chirped_frame_matrix(amplitude, delta, omega_r, dipole_ratio);
    auto ev = cubic_eigenvalues(h);

    const double scale = std::max({1.0, std::abs(delta), omega_r, amplitude});
    const double g01 = ev[1] - ev[0];
    const double g12 = ev[2] - ev[1];

    AdiabaticFrame frame;
    // near a double root the trigonometric solution is only good to ~sqrt(eps)
    frame.degenerate = std::min(g01, g12) <= 16.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * scale;
    if (!frame.degenerate) {
        ev[0] = newton_polish(h, ev[0], g01);
        ev[1] = newton_polish(h, ev[1], std::min(g01, g12));
        ev[2] = newton_polish(h, ev[2], g12);
        std::sort(ev.begin(), ev.end());
    }
    frame.eigenvalues = ev;

    if (amplitude == 0.0) {
        // Diagonal matrix: eigenvectors are basis vectors, matched by value.
        const std::array<double, 3> diag{h.d0, h.d1, h.d2};
        std::array<bool, 3> used{false, false, false};
        for (int k = 0; k < 3; ++k) {
            int best = -1;
            for (int i = 0; i < 3; ++i) {
                if (!used[i] && (best < 0 || std::abs(diag[i] - ev[k]) < std::abs(diag[best] - ev[k]))) {
                    best = i;
                }
            }
            used[best] = true;
            frame.eigenvectors[k] = Vector3r::Unit(best);
        }
        return frame;
    }

    Vector3r lo = null_vector(h, ev[0]);
    Vector3r hi = null_vector(h, ev[2]);
    canonical_sign(lo);
    canonical_sign(hi);
    // Re-orthogonalize the pair, then complete the basis.
    hi = (hi - hi.dot(lo) * lo).normalized();
    Vector3r mid = null_vector(h, ev[1]);
    Vector3r completed = hi.cross(lo);
    if (completed.dot(mid) < 0.0) {
        completed = -completed;
    }
    frame.eigenvectors = {lo, completed, hi};
    return frame;
}

void align_signs(AdiabaticFrame& frame, const AdiabaticFrame& previous)
{
    for (int k = 0; k < 3; ++k) {
        if (frame.eigenvectors[k].dot(previous.eigenvectors[k]) < 0.0) {
            frame.eigenvectors[k] = -frame.eigenvectors[k];
        }
    }
}

PhaseIntegrals phase_integrals(const ChirpedPulse& pulse, const AtomParams& params, double abs_tol)
{
    pulse.validate();
    std::vector<double> knots{pulse.window_begin()};
    for (double t : crossing_times(pulse, params)) {
        knots.push_back(t);
    }
    knots.push_back(pulse.window_end());

    std::array<double, 3> total{0.0, 0.0, 0.0};
    for (int branch = 0; branch < 3; ++branch) {
        auto f = [&](double t) {
            const Envelope env = envelope_at(pulse, t);
            return instantaneous_eigensystem(env.amplitude, env.inst_detuning - params.detuning, params.omega_r,
                                             params.dipole_ratio)
                .eigenvalues[branch];
        };
        double error_sum = 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            double error = 0.0;
            total[branch] += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                f, knots[i], knots[i + 1], 25, 1e-13, &error);
            error_sum += error;
        }
        if (!(error_sum <= abs_tol)) {
            std::ostringstream msg;
            msg << "eigenvalue quadrature did not converge (branch " << branch << ", error estimate "
                << error_sum << ")";
            throw QuadratureError(msg.str());
        }
    }
    return {total[0], total[1], total[2]};
}

Propagator3 analytic_propagator(const ChirpedPulse& pulse, const AtomParams& params)
{
    pulse.validate();
    const SpectralWindow window = rephasable_window(pulse, params.omega_r);
    if (!window.contains(params.detuning)) {
        std::ostringstream msg;
        msg << "Delta=" << params.detuning << " outside rephasable window [" << window.lo << ", " << window.hi
            << "]";
        throw NotAdiabaticWindow(msg.str());
    }

    const double t_begin = pulse.window_begin();
    const double t_end = pulse.window_end();
    const double d_begin = delta_at(pulse, params.detuning, t_begin);
    const double d_end = delta_at(pulse, params.detuning, t_end);
    const bool negative = pulse.chirp_sign() == ChirpSign::negative;
    const bool crosses = negative ? (d_begin > 0.0 && d_end < -params.omega_r)
                                  : (d_begin < -params.omega_r && d_end > 0.0);
    if (!crosses) {
        throw NotAdiabaticWindow("truncated sweep does not cross both resonances");
    }

    // Follow each eigenvector continuously across the window.
    constexpr int samples = 4096;
    auto frame_at = [&](double t) {
        const Envelope env = envelope_at(pulse, t);
        return instantaneous_eigensystem(env.amplitude, env.inst_detuning - params.detuning, params.omega_r,
                                         params.dipole_ratio);
    };
    const AdiabaticFrame first = frame_at(t_begin);
    AdiabaticFrame current = first;
    for (int i = 1; i <= samples; ++i) {
        AdiabaticFrame next = frame_at(t_begin + (t_end - t_begin) * i / samples);
        align_signs(next, current);
        current = next;
    }

    const PhaseIntegrals lam = phase_integrals(pulse, params);
    const std::array<double, 3> phases{lam.minus, lam.zero, lam.plus};

    // Chirped frame: b_r = b exp(i Phi).
    Propagator3 u = Propagator3::Zero();
    for (int k = 0; k < 3; ++k) {
        const auto [row, s_end] = nearest_basis(current.eigenvectors[k]);
        const auto [col, s_begin] = nearest_basis(first.eigenvectors[k]);
        u(row, col) += s_end * s_begin * std::polar(1.0, phases[k]);
    }
    u.row(1) *= std::polar(1.0, -phase_at(pulse, t_end));
    u.col(1) *= std::polar(1.0, phase_at(pulse, t_begin));
    return u;
}

double joint_probability(const Propagator3& u)
{
    return std::norm(u(0, 1) * u(1, 2) * u(2, 0));
}

double joint_probability(const Propagator3& u, ChirpSign sign)
{
    return sign == ChirpSign::negative ? joint_probability(u) : joint_probability(Propagator3(u.transpose()));
}

}  // namespace chirpmem
