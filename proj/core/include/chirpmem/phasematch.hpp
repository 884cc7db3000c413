#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chirpmem/pulses.hpp"
#include "chirpmem/types.hpp"

namespace chirpmem {

/// Signal and control wavevectors [rad/length] and the medium length.
struct WaveVectorSet {
    Vector3r k_s = Vector3r::Zero();
    Vector3r k_1 = Vector3r::Zero();
    Vector3r k_2 = Vector3r::Zero();
    Vector3r k_3 = Vector3r::Zero();
    double L = 0.0;
};

/// Spatial modulation of the rephased coherence, keyed by the index of the
/// control pulse after which it appears (3 is the secondary echo).
///
/// negative chirp: k_e(3) = 2 k3 - k2 - k1 + ks,  k_e(2) = k1 + k2 - ks
/// positive chirp: k_e(3) = k3 + k2 - 2 k1 + ks,  k_e(1) = 2 k1 - ks
///
/// With a negative level splitting (omega_R < 0) the two chirp cases swap.
std::map<int, Vector3r> echo_wavevectors(const WaveVectorSet& ws, ChirpSign sign, double omega_r = 1.0);

struct Silencing {
    double mismatch;  ///< | |k_e| - k_s | L [rad]
    bool silenced;    ///< mismatch > threshold * pi
};

Silencing is_silenced(const Vector3r& k_e, double k_s_mag, double L, double threshold = 1.0);

/// Named geometries with all wavevectors of magnitude k in the xy-plane and
/// signal along +x.
///
///   forward            k1 = k2 = k3 = ks
///   counter            k1 = k2 = k3 = -ks
///   backward_negative  k1 = k2 at 60 deg, k3 at 120 deg
///   backward_positive  k1 at 60 deg, k2 = k3 at 120 deg
///
/// Throws InvalidArgument for an unknown name.
WaveVectorSet geometry_preset(std::string_view name, double k, double L);

std::vector<std::string> geometry_preset_names();

/// One line of the verdict table.
struct EchoVerdict {
    int stage;
    Vector3r k_e;
    double ratio;             ///< |k_e| / k_s
    double mismatch_over_pi;  ///< mismatch / pi
    bool silenced;
};

std::vector<EchoVerdict> echo_verdicts(const WaveVectorSet& ws, ChirpSign sign, double threshold = 1.0,
                                       double omega_r = 1.0);

}  // namespace chirpmem
