#include "chirpmem/phasematch.hpp"

#include <cmath>
#include <numbers>

namespace chirpmem {

std::map<int, Vector3r> echo_wavevectors(const WaveVectorSet& ws, ChirpSign sign, double omega_r)
{
    const bool negative = (sign == ChirpSign::negative) == (omega_r > 0.0);
    std::map<int, Vector3r> out;
    if (negative) {
        out[3] = 2.0 * ws.k_3 - ws.k_2 - ws.k_1 + ws.k_s;
        out[2] = ws.k_1 + ws.k_2 - ws.k_s;
    } else {
        out[3] = ws.k_3 + ws.k_2 - 2.0 * ws.k_1 + ws.k_s;
        out[1] = 2.0 * ws.k_1 - ws.k_s;
    }
    return out;
}

Silencing is_silenced(const Vector3r& k_e, double k_s_mag, double L, double threshold)
{
    if (!(L > 0.0)) {
        throw InvalidArgument("medium length must be positive");
    }
    const double mismatch = std::abs(k_e.norm() - k_s_mag) * L;
    return {mismatch, mismatch > threshold * std::numbers::pi};
}

WaveVectorSet geometry_preset(std::string_view name, double k, double L)
{
    // cos 60 = 1/2 is exact, so the cancellations below are exact as well.
    const double c = 0.5 * k;
    const double s = 0.5 * std::sqrt(3.0) * k;
    const Vector3r ks(k, 0.0, 0.0);
    const Vector3r at60(c, s, 0.0);
    const Vector3r at120(-c, s, 0.0);

    WaveVectorSet ws;
    ws.k_s = ks;
    ws.L = L;
    if (name == "forward") {
        ws.k_1 = ws.k_2 = ws.k_3 = ks;
    } else if (name == "counter") {
        ws.k_1 = ws.k_2 = ws.k_3 = -ks;
    } else if (name == "backward_negative") {
        ws.k_1 = ws.k_2 = at60;
        ws.k_3 = at120;
    } else if (name == "backward_positive") {
        ws.k_1 = at60;
        ws.k_2 = ws.k_3 = at120;
    } else {
        throw InvalidArgument("unknown geometry preset '" + std::string(name) + "'");
    }
    return ws;
}

std::vector<std::string> geometry_preset_names()
{
    return {"forward", "counter", "backward_negative", "backward_positive"};
}

std::vector<EchoVerdict> echo_verdicts(const WaveVectorSet& ws, ChirpSign sign, double threshold, double omega_r)
{
    const double ks = ws.k_s.norm();
    std::vector<EchoVerdict> out;
    for (const auto& [stage, k] : echo_wavevectors(ws, sign, omega_r)) {
        const Silencing s = is_silenced(k, ks, ws.L, threshold);
        out.push_back({stage, k, k.norm() / ks, s.mismatch / std::numbers::pi, s.silenced});
    }
    return out;
}

}  // namespace chirpmem
