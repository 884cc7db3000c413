#include "oracles.hpp"

#include <chirpmem/dynamics.hpp>
#include <chirpmem/maxwell.hpp>
#include <chirpmem/sequence.hpp>

#include <gtest/gtest.h>

using namespace chirpmem;

namespace {

const std::array<double, 3> centers{10.0, 26.0, 46.0};

ChirpedPulse reference_pulse()
{
    return ChirpedPulse::make(16.0, 1.0, -5.0, -30.0);
}

MediumSpec narrow(double length, double alpha = 1.0)
{
    MediumSpec m;
    m.alpha_d = alpha;
    m.omega_r = 10.0;
    m.spectrum = SpectralDistribution::uniform(-20.0, 20.0);
    m.length = length;
    return m;
}

PropagationOptions coarse(std::size_t nz, std::size_t nt = 4096)
{
    PropagationOptions o;
    o.grid.z_steps = nz;
    o.grid.time_steps = nt;
    return o;
}

}  // namespace

TEST(Maxwell, Coupling)
{
    EXPECT_NEAR(narrow(1.0, 2.0).coupling(), 2.0 * 40.0 / M_PI, 1e-12);
    auto m = narrow(1.0);
    m.spectrum = SpectralDistribution::gaussian(1.0, 20.0);
    EXPECT_THROW(m.coupling(), InvalidArgument);
    EXPECT_THROW(propagate_controls(m, reference_pulse(), centers, coarse(2)), InvalidArgument);
}

TEST(Maxwell, MidpointInterpolationExactForCubics)
{
    const std::size_t n = 12;
    std::vector<cplx> nodes(n + 1), one(n + 1, 1.0), mids(n), one_mid(n, 1.0);
    auto f = [](double x) { return cplx(1.0 - 2.0 * x + 0.5 * x * x * x, 0.3 * x * x); };
    for (std::size_t k = 0; k <= n; ++k) {
        nodes[k] = f(double(k));
    }
    interpolate_midpoints(nodes, one, one_mid, mids);
    for (std::size_t k = 0; k < n; ++k) {
        EXPECT_NEAR(std::abs(mids[k] - f(k + 0.5)), 0.0, 1e-12) << k;
    }
}

TEST(Maxwell, VacuumPropagation)
{
    const auto c = propagate_controls(narrow(3.0, 0.0), reference_pulse(), centers, coarse(3, 1024));
    for (const auto& f : c.fields) {
        const auto in = f.row(0), out = f.row(3);
        double worst = 0;
        for (std::size_t k = 0; k < in.size(); ++k) {
            worst = std::max(worst, std::abs(out[k] - in[k]));
            EXPECT_NEAR(std::abs(in[k] - oracle::sech_field(f.input, f.xi(k))), 0.0, 1e-12);
        }
        EXPECT_LT(worst, 1e-10 * f.peak(0));
    }
}

TEST(Maxwell, WeakPulseFollowsBeerLaw)
{
    // unchirped weak pulse well inside the +-20 band: intensity decays as exp(-alpha_d z)
    auto p = ChirpedPulse::make(1e-3, 0.5, 0.0, 0.0);
    const auto c = propagate_controls(narrow(2.0), p, centers, coarse(20, 2048));
    const auto& f = c.fields[0];
    for (std::size_t iz : {5u, 10u, 20u}) {
        EXPECT_NEAR(f.energy(iz) / f.energy(0), std::exp(-c.z_alpha(iz)), 0.01 * std::exp(-c.z_alpha(iz)));
    }
}

TEST(Maxwell, NarrowEnsembleShapesControls)
{
    const auto c = propagate_controls(narrow(5.0), reference_pulse(), centers, coarse(10));
    const std::size_t last = 10;
    EXPECT_LT(c.fields[1].peak(last), c.fields[1].peak(0));
    EXPECT_GT(c.fields[2].peak(last), c.fields[2].peak(0));
    EXPECT_LT(std::abs(c.fields[0].peak(last) / c.fields[0].peak(0) - 1.0), 0.15);
    EXPECT_LT(c.max_norm_defect, 1e-5);
}

TEST(Maxwell, NormConservedAtDefaultResolution)
{
    const auto c = propagate_controls(narrow(1.0), reference_pulse(), centers, coarse(2, 8192));
    EXPECT_LT(c.max_norm_defect, 1e-6);
    for (const auto& v : c.final_states) {
        EXPECT_NEAR(v.squaredNorm(), 1.0, 3e-6);
    }
}

TEST(Maxwell, DeterministicAcrossWorkers)
{
    auto o = coarse(3, 1024);
    const auto a = propagate_controls(narrow(2.0), reference_pulse(), centers, o);
    o.workers = 3;
    const auto b = propagate_controls(narrow(2.0), reference_pulse(), centers, o);
    for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(a.fields[j].values, b.fields[j].values);
    }
}

TEST(Maxwell, Causality)
{
    auto o = coarse(6, 1024);
    const auto ref = propagate_controls(narrow(3.0), reference_pulse(), centers, o);
    const std::size_t kick = 3;
    o.field_hook = [&](int pulse, std::size_t iz, std::span<cplx> row) {
        if (pulse == 1 && iz == kick) {
            row[row.size() / 2] += 0.5;
        }
    };
    const auto hit = propagate_controls(narrow(3.0), reference_pulse(), centers, o);
    for (int j = 0; j < 3; ++j) {
        for (std::size_t iz = 0; iz < kick; ++iz) {
            const auto a = ref.fields[j].row(iz), b = hit.fields[j].row(iz);
            EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << j << " " << iz;
        }
    }
    const auto a = ref.fields[2].row(6), b = hit.fields[2].row(6);
    EXPECT_FALSE(std::equal(a.begin(), a.end(), b.begin()));
}

TEST(Maxwell, RephasingMapEntranceMatchesSingleAtom)
{
    const auto c = propagate_controls(narrow(1.0), reference_pulse(), centers, coarse(2, 4096));
    const std::vector<double> grid{-15.0, -5.0, 0.0, 7.0, 15.0};
    const auto map = rephasing_map(c, grid, 1);
    ASSERT_EQ(map.z_index.size(), 3u);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const AtomParams at{grid[i], 10.0, 1.0};
        std::array<Propagator3, 3> u;
        for (int j = 0; j < 3; ++j) {
            u[j] = pulse_propagator(at, reference_pulse().centered_at(centers[j]), IntegratorOptions::with_tolerance(1e-10));
        }
        const cplx r = rephasing_factor(u[0], u[1], u[2]);
        EXPECT_GE(std::norm(map.at(i, 0)), 0.99);
        EXPECT_NEAR(oracle::wrap(std::arg(map.at(i, 0)) - std::arg(r)), 0.0, 0.05);
        EXPECT_NEAR(std::norm(map.at(i, 0)), std::norm(r), 1e-3);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_LE(std::abs(map.at(i, j)), 1.0 + 1e-6);
        }
    }
}

TEST(Maxwell, ZeroDensityMapIsZIndependent)
{
    const auto c = propagate_controls(narrow(2.0, 0.0), reference_pulse(), centers, coarse(4, 2048));
    const std::vector<double> grid{-10.0, 0.0, 12.0};
    const auto map = rephasing_map(c, grid, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 1; j < map.z_index.size(); ++j) {
            EXPECT_LT(std::abs(map.at(i, j) - map.at(i, 0)), 1e-6);
        }
    }
}

TEST(Maxwell, StoredPropagatorsAreUnitary)
{
    const auto c = propagate_controls(narrow(2.0), reference_pulse(), centers, coarse(4, 8192));
    for (const auto& u : stored_pulse_propagators(c, 4, 3.0)) {
        EXPECT_LT(unitarity_defect(u), 1e-6);
    }
}

class EchoTest : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        controls_ = new ControlPropagation(propagate_controls(narrow(2.0), reference_pulse(), centers, coarse(8, 4096)));
    }
    static void TearDownTestSuite() { delete controls_; }

    static SequenceTiming timing()
    {
        SequenceTiming t;
        t.t0 = 0, t.t1 = 10, t.t2 = 26, t.t3 = 46, t.T = 2, t.T_prime = 8;
        return t;
    }
    static ChirpedPulse signal(double amp)
    {
        auto s = ChirpedPulse::make(amp, 0.25, 0.0, 0.0, 0.0);
        s.half_window = 2.0;
        return s;
    }
    static ControlPropagation* controls_;
};

ControlPropagation* EchoTest::controls_ = nullptr;

TEST_F(EchoTest, ZeroSignalGivesZeroEcho)
{
    EchoOptions o;
    o.window_steps = 512;
    const auto r = weak_signal_echo(*controls_, reference_pulse(), timing(), signal(0.0), o);
    for (const auto& v : r.echo_out) {
        EXPECT_EQ(v, cplx(0.0));
    }
    for (double e : r.efficiency) {
        EXPECT_EQ(e, 0.0);
    }
    EXPECT_FALSE(r.nonlinear);
}

TEST_F(EchoTest, EchoAtRephasingTime)
{
    EchoOptions o;
    o.window_steps = 512;
    const auto r = weak_signal_echo(*controls_, reference_pulse(), timing(), signal(1e-4), o);
    EXPECT_DOUBLE_EQ(r.timing.t4, 56.0);
    EXPECT_NEAR(r.echo_peak_time, 56.0, 0.25);
    EXPECT_EQ(r.efficiency.front(), 0.0);
    EXPECT_GT(r.efficiency.back(), 0.1);
    EXPECT_FALSE(r.nonlinear);
    EXPECT_NEAR(r.efficiency_full, r.efficiency.back(), 0.01 * r.efficiency.back());
}

TEST_F(EchoTest, RejectsStrongSignalAndMismatchedTiming)
{
    EXPECT_THROW(weak_signal_echo(*controls_, reference_pulse(), timing(), signal(0.1)), InvalidArgument);
    auto t = timing();
    t.t2 = 25.5;  // rephases at 56.5 but the stored controls sit at 26
    EXPECT_THROW(weak_signal_echo(*controls_, reference_pulse(), t, signal(1e-4)), InvalidArgument);
}
