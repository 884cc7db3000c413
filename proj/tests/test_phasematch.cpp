#include <chirpmem/phasematch.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace chirpmem;

namespace {

const double k = 2.0 * std::numbers::pi / 580e-6;  // rad/mm

Vector3r xhat(double mag = 1.0)
{
    return {mag, 0.0, 0.0};
}

}  // namespace

TEST(Phasematch, ForwardGeometry)
{
    const auto ws = geometry_preset("forward", k, 1.0);
    for (auto sign : {ChirpSign::negative, ChirpSign::positive}) {
        const auto e = echo_wavevectors(ws, sign);
        EXPECT_EQ(e.at(3), ws.k_s);
    }
}

TEST(Phasematch, CounterPropagatingSilencesPrimary)
{
    const auto ws = geometry_preset("counter", k, 1.0);
    EXPECT_EQ(ws.k_1, -ws.k_s);
    const auto e = echo_wavevectors(ws, ChirpSign::negative);
    EXPECT_EQ(e.at(2), -3.0 * ws.k_s);
    EXPECT_TRUE(is_silenced(e.at(2), k, 1.0).silenced);
}

TEST(Phasematch, BackwardPresets)
{
    const auto neg = geometry_preset("backward_negative", k, 1.0);
    EXPECT_EQ(echo_wavevectors(neg, ChirpSign::negative).at(3), -neg.k_s);
    const auto pos = geometry_preset("backward_positive", k, 1.0);
    EXPECT_EQ(echo_wavevectors(pos, ChirpSign::positive).at(3), -pos.k_s);
    // neighboring directions pi / 3 apart, all magnitudes k
    for (const auto& ws : {neg, pos}) {
        for (const auto& v : {ws.k_s, ws.k_1, ws.k_2, ws.k_3}) {
            EXPECT_NEAR(v.norm(), k, 1e-9 * k);
        }
    }
    EXPECT_NEAR(neg.k_1.dot(neg.k_s) / (k * k), 0.5, 1e-12);
    EXPECT_NEAR(neg.k_3.dot(neg.k_s) / (k * k), -0.5, 1e-12);
    EXPECT_FALSE(is_silenced(-neg.k_s, k, 1.0).silenced);
    EXPECT_THROW(geometry_preset("sideways", k, 1.0), InvalidArgument);
}

TEST(Phasematch, StageKeysPerChirp)
{
    const auto ws = geometry_preset("forward", k, 1.0);
    const auto n = echo_wavevectors(ws, ChirpSign::negative);
    const auto p = echo_wavevectors(ws, ChirpSign::positive);
    EXPECT_EQ(n.size(), 2u);
    EXPECT_TRUE(n.count(2) && n.count(3));
    EXPECT_TRUE(p.count(1) && p.count(3));
}

TEST(Phasematch, ExplicitFormulas)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    auto rnd = [&] { return Vector3r(u(rng), u(rng), u(rng)); };
    WaveVectorSet ws{rnd(), rnd(), rnd(), rnd(), 1.0};
    const auto n = echo_wavevectors(ws, ChirpSign::negative);
    const auto p = echo_wavevectors(ws, ChirpSign::positive);
    EXPECT_LT((n.at(3) - (2 * ws.k_3 - ws.k_2 - ws.k_1 + ws.k_s)).norm(), 1e-15);
    EXPECT_LT((n.at(2) - (ws.k_1 + ws.k_2 - ws.k_s)).norm(), 1e-15);
    EXPECT_LT((p.at(3) - (ws.k_3 + ws.k_2 - 2 * ws.k_1 + ws.k_s)).norm(), 1e-15);
    EXPECT_LT((p.at(1) - (2 * ws.k_1 - ws.k_s)).norm(), 1e-15);
}

TEST(Phasematch, LinearityAndBound)
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        auto unit = [&] {
            Vector3r v(u(rng), u(rng), u(rng));
            return Vector3r(k * v.normalized());
        };
        WaveVectorSet ws{unit(), unit(), unit(), unit(), 1.0};
        WaveVectorSet neg{-ws.k_s, -ws.k_1, -ws.k_2, -ws.k_3, 1.0};
        for (auto sign : {ChirpSign::negative, ChirpSign::positive}) {
            const auto a = echo_wavevectors(ws, sign);
            const auto b = echo_wavevectors(neg, sign);
            for (const auto& [stage, v] : a) {
                EXPECT_LT((b.at(stage) + v).norm(), 1e-9 * k);
            }
            EXPECT_LE(a.at(3).norm(), 5.0 * k * (1 + 1e-12));
        }
    }
}

TEST(Phasematch, NegativeSplittingSwapsChirpCases)
{
    const auto ws = geometry_preset("backward_negative", k, 1.0);
    EXPECT_EQ(echo_wavevectors(ws, ChirpSign::negative, -1.0), echo_wavevectors(ws, ChirpSign::positive, 1.0));
    EXPECT_EQ(echo_wavevectors(ws, ChirpSign::positive, -1.0), echo_wavevectors(ws, ChirpSign::negative, 1.0));
}

TEST(Phasematch, SilencingArithmetic)
{
    const auto s = is_silenced(xhat(3.0 * k), k, 1.0);
    // oracle: 2 k L / pi with k = 2 pi / 580 nm, L = 1 mm
    EXPECT_NEAR(s.mismatch / std::numbers::pi, 2.0 * (2.0 * std::numbers::pi / 580e-9) * 1e-3 / std::numbers::pi,
                1e-6);
    EXPECT_NEAR(s.mismatch, 2.17e4, 0.01e4);
    EXPECT_TRUE(s.silenced);

    const auto z = is_silenced(xhat(k), k, 1.0);
    EXPECT_EQ(z.mismatch, 0.0);
    EXPECT_FALSE(z.silenced);

    // threshold is applied to mismatch / pi
    const auto edge = is_silenced(xhat(k + 0.5 * std::numbers::pi), k, 1.0);
    EXPECT_FALSE(edge.silenced);
    EXPECT_TRUE(is_silenced(xhat(k + 0.5 * std::numbers::pi), k, 1.0, 0.4).silenced);
    EXPECT_THROW(is_silenced(xhat(k), k, 0.0), InvalidArgument);
}

TEST(Phasematch, VerdictTable)
{
    const auto ws = geometry_preset("backward_negative", k, 1.0);
    const auto v = echo_verdicts(ws, ChirpSign::negative);
    ASSERT_EQ(v.size(), 2u);
    const auto& sec = v[0].stage == 3 ? v[0] : v[1];
    EXPECT_EQ(sec.k_e, -ws.k_s);
    EXPECT_DOUBLE_EQ(sec.ratio, 1.0);
    EXPECT_FALSE(sec.silenced);
}
