#include "oracles.hpp"

#include <chirpmem/dynamics.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace chirpmem;

namespace {

// Blue-to-red pulse in omega_R = 1 units: tau = 10, A0 = 2, delta0 = -0.5, mu/tau = -2
ChirpedPulse slow_pulse()
{
    return ChirpedPulse::make(2.0, 10.0, -0.5, -20.0);
}

const ComplexField no_field = [](double) { return cplx(0.0); };

}  // namespace

TEST(Dynamics, ZeroFieldFreePhases)
{
    AtomParams at{0.7, 2.0, 1.0};
    AtomState s{cplx(0.6, 0.0), cplx(0.0, 0.48), cplx(0.64, 0.0)};
    const double dt = 3.3;
    const auto e = integrate_state(s, at, no_field, 1.0, 1.0 + dt);
    EXPECT_NEAR(std::abs(e.a - s.a), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(e.b - s.b * std::polar(1.0, -at.detuning * dt)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(e.c - s.c * std::polar(1.0, -at.omega_r * dt)), 0.0, 1e-9);
}

TEST(Dynamics, DecoupledThirdLevel)
{
    AtomParams at{0.0, 1.0, 0.0};
    const auto p = slow_pulse();
    const auto e = integrate_state(AtomState::basis(3), at, as_field(p), p.window_begin(), p.window_end());
    EXPECT_NEAR(std::norm(e.c), 1.0, 1e-12);
}

TEST(Dynamics, SlowPulseTransfersOneToThree)
{
    AtomParams at{0.0, 1.0, 1.0};
    const auto p = slow_pulse();
    const auto e = integrate_state(AtomState::ground(), at, as_field(p), p.window_begin(), p.window_end());
    EXPECT_GE(std::norm(e.c), 0.99);
}

TEST(Dynamics, SlowPulseCyclicPattern)
{
    const auto u = pulse_propagator({0.0, 1.0, 1.0}, slow_pulse());
    EXPECT_GE(std::norm(u(2, 0)), 0.99);  // U_31
    EXPECT_GE(std::norm(u(0, 1)), 0.99);  // U_12
    EXPECT_GE(std::norm(u(1, 2)), 0.99);  // U_23
}

TEST(Dynamics, PropagatorMatchesReferenceRk4)
{
    const AtomParams at{0.3, 1.0, 1.3};
    const auto p = slow_pulse();
    const auto u = propagator(at, as_field(p), p.window_begin(), p.window_end(), IntegratorOptions::with_tolerance(1e-11));
    const auto ref = oracle::rk4_propagator(at.detuning, at.omega_r, at.dipole_ratio,
                                            [&](double t) { return oracle::sech_field(p, t); }, p.window_begin(),
                                            p.window_end(), 160000);
    EXPECT_LT((u - ref).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Dynamics, ZeroFieldPropagatorEqualsFreePropagator)
{
    const AtomParams at{-1.7, 2.5, 1.0};
    const auto u = propagator(at, no_field, 0.0, 4.2, IntegratorOptions::with_tolerance(1e-11));
    EXPECT_LT((u - free_propagator(at, 4.2)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Dynamics, FreePropagatorClosedForm)
{
    const AtomParams at{0.9, 2.0, 1.0};
    EXPECT_LT((free_propagator(at, 0.0) - Propagator3::Identity()).cwiseAbs().maxCoeff(), 1e-15);

    const AtomParams zero{0.0, 2.0, 1.0};
    const auto f = free_propagator(zero, 1.5);
    EXPECT_NEAR(std::abs(f(1, 1) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f(2, 2) - std::polar(1.0, -3.0)), 0.0, 1e-15);

    const auto ab = free_propagator(at, 1.1) * free_propagator(at, 2.3);
    EXPECT_LT((ab - free_propagator(at, 3.4)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(free_propagator(at, -1.0), InvalidArgument);
}

TEST(Dynamics, UnitarityRandomDraws)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 12; ++k) {
        const double tau = 0.5 + 4.0 * u01(rng);
        auto p = ChirpedPulse::make(0.5 + 6.0 * u01(rng), tau, -3.0 + 6.0 * u01(rng), (u01(rng) - 0.5) * 40.0 * tau);
        const AtomParams at{-5.0 + 10.0 * u01(rng), 0.5 + 4.0 * u01(rng), 0.5 + u01(rng)};
        EXPECT_LT(unitarity_defect(pulse_propagator(at, p)), 1e-6) << k;
    }
}

TEST(Dynamics, NormConservation)
{
    const auto p = slow_pulse();
    for (double delta : {-2.0, 0.0, 0.4, 3.0}) {
        const auto e = integrate_state(AtomState::ground(), {delta, 1.0, 1.0}, as_field(p), p.window_begin(),
                                       p.window_end(), IntegratorOptions::with_tolerance(1e-10));
        EXPECT_LT(std::abs(e.norm_squared() - 1.0), 1e-8);
    }
}

TEST(Dynamics, TighterToleranceConverges)
{
    const AtomParams at{0.2, 1.0, 1.0};
    const auto p = slow_pulse();
    const auto f = as_field(p);
    const auto ref = integrate_state(AtomState::ground(), at, f, p.window_begin(), p.window_end(),
                                     IntegratorOptions::with_tolerance(1e-13))
                         .vector();
    double last = INFINITY;
    for (double tol : {1e-4, 1e-6, 1e-8, 1e-10}) {
        const auto v = integrate_state(AtomState::ground(), at, f, p.window_begin(), p.window_end(),
                                       IntegratorOptions::with_tolerance(tol))
                           .vector();
        const double err = (v - ref).norm();
        EXPECT_LT(err, last) << tol;
        last = err;
    }
}

TEST(Dynamics, StepLimitReportsFailure)
{
    IntegratorOptions o;
    o.max_steps = 10;
    const auto p = slow_pulse();
    EXPECT_THROW(integrate_state(AtomState::ground(), {0.0, 1.0, 1.0}, as_field(p), p.window_begin(),
                                 p.window_end(), o),
                 IntegrationError);
    EXPECT_THROW(integrate_state(AtomState::ground(), {0.0, 1.0, 1.0}, no_field, 1.0, 0.0), InvalidArgument);
}

TEST(Dynamics, FixedStepModeMatchesAdaptive)
{
    IntegratorOptions o;
    o.fixed_steps = 20000;
    const AtomParams at{-0.4, 1.0, 1.0};
    const auto p = slow_pulse();
    const auto a = pulse_propagator(at, p, o);
    const auto b = pulse_propagator(at, p, IntegratorOptions::with_tolerance(1e-11));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Dynamics, SampledStepperMatchesReference)
{
    const auto p = ChirpedPulse::make(16.0, 1.0, -5.0, -30.0, 0.0);
    const std::size_t n = 8192;
    const double dt = 2.0 * p.half_window / n;
    std::vector<cplx> nodes(n + 1), mids(n);
    for (std::size_t k = 0; k <= n; ++k) {
        nodes[k] = oracle::sech_field(p, p.window_begin() + k * dt);
    }
    for (std::size_t k = 0; k < n; ++k) {
        mids[k] = oracle::sech_field(p, p.window_begin() + (k + 0.5) * dt);
    }
    FixedStepStepper stepper(10.0, 1.0, dt, n);
    for (double delta : {-12.0, 0.0, 7.5}) {
        Vector3c y(1.0, 0.0, 0.0);
        stepper.evolve(y, delta, {dt, nodes, mids});
        const auto ref = oracle::rk4_state(Eigen::Vector3cd(1.0, 0.0, 0.0), delta, 10.0, 1.0,
                                           [&](double t) { return oracle::sech_field(p, t); }, p.window_begin(),
                                           p.window_end(), 64000);
        EXPECT_LT((y - ref).norm(), 1e-6) << delta;
        EXPECT_LT(std::abs(y.squaredNorm() - 1.0), 1e-6);

        Propagator3 u = Propagator3::Identity();
        stepper.evolve(u, delta, {dt, nodes, mids});
        EXPECT_LT((u.col(0) - y).norm(), 1e-14);
    }
}
