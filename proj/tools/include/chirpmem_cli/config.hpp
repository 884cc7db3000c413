#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chirpmem::cli {

/// Bad config text or a value that fails validation.  `what()` starts with
/// the dotted field path when one applies.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat view of a TOML-style file: "section.key" -> value.
///
/// Supported subset: `[section]` headers (dotted names allowed), `key = value`
/// with numbers, double-quoted strings, true/false and flat arrays of
/// numbers; `#` comments.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;
using ConfigTable = std::map<std::string, ConfigValue>;

ConfigTable parse_config(const std::string& text);
ConfigTable read_config_file(const std::string& path);

/// Every frequency is angular, rad/us; every time is in us.
struct RunConfig {
    std::string scenario = "sequence-check";

    struct Pulse {
        double amplitude = 16.0;     // A0
        double tau_p = 1.0;
        double delta0 = -5.0;
        double chirp_range = -30.0;  // mu / tau_p
        double half_window = 8.0;    // T'
    } pulse;

    struct Atom {
        double omega_r = 10.0;
        double dipole_ratio = 1.0;
        double delta = 0.0;  // single-atom runs
    } atom;

    struct Timing {
        double t0 = 0.0;
        double t1 = 10.0;
        double t2 = 26.0;
        double t3 = 46.0;
        std::optional<double> t4;  // solved from the rephasing condition when absent
        double T = 2.0;
    } timing;

    struct Scan {
        double delta_lo = -60.0;
        double delta_hi = 60.0;
        std::size_t delta_points = 1601;
        double tau_lo = 0.1;
        double tau_hi = 2.0;
        std::size_t tau_points = 81;
        double chirp_lo = -4.0;  // in units of omega_R
        double chirp_hi = 0.0;
        std::size_t chirp_points = 81;
        std::string mode = "numeric";
        double rel_tol = 1e-9;
        std::size_t max_steps = 20'000'000;  // adaptive integrator step cap per pulse
        double window_fraction = 0.8;  // sequence-check samples this central part of the window
    } scan;

    struct Medium {
        double alpha_d = 1.0;
        double length = 6.0;
        std::string spectrum = "uniform";
        double lo = -20.0;
        double hi = 20.0;
        double sigma = 10.0;
        double sigma_s = 5.0;
    } medium;

    struct Grid {
        std::size_t z_steps = 100;
        std::size_t time_steps = 8192;
        std::size_t delta_nodes = 201;
        std::size_t delta_panels = 1;
        bool check_resolution = false;
        std::size_t z_stride = 10;  // output slices
        std::size_t xi_stride = 8;
    } grid;

    struct Map {
        double delta_lo = -20.0;
        double delta_hi = 20.0;
        std::size_t delta_points = 81;
    } map;

    struct Echo {
        double signal_amplitude = 1e-4;
        double signal_tau = 0.25;
        std::size_t window_steps = 2048;
        bool check_linearity = true;
        std::vector<double> lengths{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0};
    } echo;

    struct Phasematch {
        std::string geometry = "forward";
        double k = 1.0833078115826873e4;  // 2 pi / 580 nm in rad/mm
        double length = 1.0;              // mm
        double threshold = 1.0;
    } phasematch;

    struct Material {
        std::string preset;  // empty: no material report
    } material;

    /// Fills fields from a table; unknown keys and wrong types are errors.
    static RunConfig from_table(const ConfigTable& table);
    static RunConfig from_file(const std::string& path);

    ConfigTable to_table() const;
    /// Round-trips through parse_config + from_table.
    std::string to_text() const;

    /// Cross-field checks, including the timing invariants.
    void validate() const;
};

std::string format_double(double v);

}  // namespace chirpmem::cli
