#include "oracles.hpp"

#include <chirpmem/adiabatic.hpp>
#include <chirpmem/dynamics.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace chirpmem;

namespace {

ChirpedPulse slow_pulse(double sign = -1.0)
{
    return ChirpedPulse::make(2.0, 10.0, -0.5, sign * 20.0);
}

void expect_vector(const Vector3r& v, const Vector3r& want, double tol)
{
    // eigenvectors are defined up to sign
    EXPECT_LT(std::min((v - want).norm(), (v + want).norm()), tol) << v.transpose();
}

double sorted_diabatic(int branch, double delta, double omega_r)
{
    std::array<double, 3> v{0.0, delta, -omega_r};
    std::sort(v.begin(), v.end());
    return v[branch];
}

}  // namespace

TEST(Adiabatic, WeakFieldLimitAboveResonance)
{
    for (double a : {0.0, 1e-7}) {
        const auto f = instantaneous_eigensystem(a, 1.3, 1.0, 1.0);
        EXPECT_NEAR(f.minus(), -1.0, 1e-9);
        EXPECT_NEAR(f.zero(), 0.0, 1e-9);
        EXPECT_NEAR(f.plus(), 1.3, 1e-9);
        expect_vector(f.eigenvectors[2], {0, 1, 0}, 1e-6);
        expect_vector(f.eigenvectors[1], {1, 0, 0}, 1e-6);
        expect_vector(f.eigenvectors[0], {0, 0, 1}, 1e-6);
        EXPECT_FALSE(f.degenerate);
    }
}

TEST(Adiabatic, WeakFieldLimitBelowBothResonances)
{
    const auto f = instantaneous_eigensystem(1e-7, -2.5, 1.0, 1.0);
    EXPECT_NEAR(f.plus(), 0.0, 1e-9);
    EXPECT_NEAR(f.zero(), -1.0, 1e-9);
    EXPECT_NEAR(f.minus(), -2.5, 1e-9);
    expect_vector(f.eigenvectors[2], {1, 0, 0}, 1e-6);
    expect_vector(f.eigenvectors[1], {0, 0, 1}, 1e-6);
    expect_vector(f.eigenvectors[0], {0, 1, 0}, 1e-6);
}

TEST(Adiabatic, DegenerateFlag)
{
    EXPECT_TRUE(instantaneous_eigensystem(0.0, 0.0, 1.0, 1.0).degenerate);
    EXPECT_TRUE(instantaneous_eigensystem(0.0, -1.0, 1.0, 1.0).degenerate);
    EXPECT_FALSE(instantaneous_eigensystem(0.1, 0.0, 1.0, 1.0).degenerate);
}

TEST(Adiabatic, EigenvaluesMatchGeneralSolver)
{
    const auto f = instantaneous_eigensystem(1.0, -0.5, 1.0, 1.0);
    const auto ref = oracle::eigenvalues(1.0, -0.5, 1.0, 1.0);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(f.eigenvalues[k], ref[k], 1e-10);
    }

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const double a = 10.0 * std::abs(u(rng)), d = 30.0 * u(rng), w = 0.1 + 10.0 * std::abs(u(rng));
        const double dip = 2.0 * std::abs(u(rng));
        const auto g = instantaneous_eigensystem(a, d, w, dip);
        const auto r = oracle::eigenvalues(a, d, w, dip);
        Eigen::Matrix3d h;
        h << 0, a, 0, a, 2 * d, dip * a, 0, dip * a, -2 * w;
        h *= 0.5;
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(g.eigenvalues[j], r[j], 1e-10 * (1.0 + std::abs(r[j])));
            EXPECT_LT((h * g.eigenvectors[j] - g.eigenvalues[j] * g.eigenvectors[j]).norm(), 1e-9);
            for (int i = 0; i < 3; ++i) {
                EXPECT_NEAR(g.eigenvectors[i].dot(g.eigenvectors[j]), i == j ? 1.0 : 0.0, 1e-12);
            }
        }
        EXPECT_LT(g.minus(), g.zero());
        EXPECT_LT(g.zero(), g.plus());
    }
}

TEST(Adiabatic, BranchesContinuousAndGapped)
{
    const auto p = slow_pulse();
    const int n = 4000;
    AdiabaticFrame prev{};
    double max_jump = 0.0, min_gap = INFINITY;
    for (int k = 0; k <= n; ++k) {
        const double t = p.window_begin() + (p.window_end() - p.window_begin()) * k / n;
        const auto env = envelope_at(p, t);
        auto f = instantaneous_eigensystem(env.amplitude, env.inst_detuning, 1.0, 1.0);
        if (k > 0) {
            align_signs(f, prev);
            for (int j = 0; j < 3; ++j) {
                max_jump = std::max(max_jump, std::abs(f.eigenvalues[j] - prev.eigenvalues[j]));
                EXPECT_GE(f.eigenvectors[j].dot(prev.eigenvectors[j]), 0.0);
            }
        }
        min_gap = std::min({min_gap, f.plus() - f.zero(), f.zero() - f.minus()});
        prev = f;
    }
    EXPECT_GT(min_gap, 0.0);
    EXPECT_LT(max_jump, 0.01);
}

TEST(Adiabatic, PhaseIntegralsZeroAmplitude)
{
    auto p = slow_pulse();
    p.peak_amplitude = 0.0;
    const AtomParams at{0.2, 1.0, 1.0};
    const auto l = phase_integrals(p, at);
    const std::array<double, 3> got{l.minus, l.zero, l.plus};
    for (int j = 0; j < 3; ++j) {
        const double ref = oracle::simpson(
            [&](double t) { return sorted_diabatic(j, envelope_at(p, t).inst_detuning - at.detuning, 1.0); },
            p.window_begin(), p.window_end(), 2'000'000);
        EXPECT_NEAR(got[j], ref, 1e-6) << j;
    }
}

TEST(Adiabatic, PhaseIntegralsMatchTrapezoid)
{
    const auto p = slow_pulse();
    const AtomParams at{0.0, 1.0, 1.0};
    const auto l = phase_integrals(p, at);
    const int n = 400000;
    const double h = (p.window_end() - p.window_begin()) / n;
    std::array<double, 3> ref{};
    for (int k = 0; k <= n; ++k) {
        const double t = p.window_begin() + k * h;
        const auto env = envelope_at(p, t);
        const auto ev = oracle::eigenvalues(env.amplitude, env.inst_detuning, 1.0, 1.0);
        const double w = (k == 0 || k == n) ? 0.5 * h : h;
        for (int j = 0; j < 3; ++j) {
            ref[j] += w * ev[j];
        }
    }
    EXPECT_NEAR(l.minus, ref[0], 1e-6);
    EXPECT_NEAR(l.zero, ref[1], 1e-6);
    EXPECT_NEAR(l.plus, ref[2], 1e-6);
}

TEST(Adiabatic, LongerWindowAddsDiabaticTail)
{
    auto p = ChirpedPulse::make(16.0, 1.0, -5.0, -30.0);
    const AtomParams at{1.0, 10.0, 1.0};
    const auto base = phase_integrals(p, at);
    auto wide = p;
    wide.half_window = 16.0;
    const auto more = phase_integrals(wide, at);
    const std::array<double, 3> d{more.minus - base.minus, more.zero - base.zero, more.plus - base.plus};
    for (int j = 0; j < 3; ++j) {
        // the field is still ~1e-2 at the old edge, so use full eigenvalues
        auto tail = [&](double t) {
            const auto env = envelope_at(wide, t);
            return oracle::eigenvalues(env.amplitude, env.inst_detuning - at.detuning, 10.0, 1.0)[j];
        };
        const double ref = oracle::simpson(tail, -16.0, -8.0, 20000) + oracle::simpson(tail, 8.0, 16.0, 20000);
        EXPECT_NEAR(d[j], ref, 1e-6) << j;
    }
}

TEST(Adiabatic, PermutationPatterns)
{
    const AtomParams at{0.0, 1.0, 1.0};
    const auto neg = analytic_propagator(slow_pulse(-1.0), at);
    const auto pos = analytic_propagator(slow_pulse(+1.0), at);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const bool nz_neg = (i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0);
            const bool nz_pos = (i == 1 && j == 0) || (i == 2 && j == 1) || (i == 0 && j == 2);
            EXPECT_NEAR(std::abs(neg(i, j)), nz_neg ? 1.0 : 0.0, 1e-12);
            EXPECT_NEAR(std::abs(pos(i, j)), nz_pos ? 1.0 : 0.0, 1e-12);
        }
    }
    EXPECT_LT(unitarity_defect(neg), 1e-12);
    EXPECT_DOUBLE_EQ(joint_probability(neg), 1.0);
    EXPECT_DOUBLE_EQ(joint_probability(pos, ChirpSign::positive), 1.0);
}

TEST(Adiabatic, OutsideWindowThrows)
{
    const auto p = ChirpedPulse::make(16.0, 1.0, -5.0, -30.0);
    EXPECT_THROW(analytic_propagator(p, {26.0, 10.0, 1.0}), NotAdiabaticWindow);
    EXPECT_THROW(analytic_propagator(p, {-26.0, 10.0, 1.0}), NotAdiabaticWindow);
    EXPECT_NO_THROW(analytic_propagator(p, {20.0, 10.0, 1.0}));
}

TEST(Adiabatic, AgreesWithNumericInDeepAdiabaticRegime)
{
    // tau omega_R = 20, A0 = 20 / tau, mu / tau = -1.5 omega_R
    const auto p = ChirpedPulse::make(1.0, 20.0, -0.5, -30.0);
    const AtomParams at{0.0, 1.0, 1.0};
    const auto a = analytic_propagator(p, at);
    const auto n = pulse_propagator(at, p, IntegratorOptions::with_tolerance(1e-11));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(std::abs(a(i, j)), std::abs(n(i, j)), 0.02);
            if (std::abs(a(i, j)) > 0.5) {
                EXPECT_NEAR(oracle::wrap(std::arg(a(i, j)) - std::arg(n(i, j))), 0.0, 0.05) << i << j;
            }
        }
    }
}

TEST(Adiabatic, JointProbabilityBasics)
{
    EXPECT_EQ(joint_probability(Propagator3::Identity()), 0.0);
    Propagator3 perm = Propagator3::Zero();
    perm(0, 1) = perm(1, 2) = perm(2, 0) = 1.0;
    EXPECT_DOUBLE_EQ(joint_probability(perm), 1.0);

    const auto u = pulse_propagator({0.0, 1.0, 1.0}, slow_pulse());
    EXPECT_NEAR(joint_probability(u * std::polar(1.0, 0.83)), joint_probability(u), 1e-14);
    EXPECT_GE(joint_probability(u), 0.0);
    EXPECT_LE(joint_probability(u), 1.0 + 1e-12);
}
