#pragma once

#include <array>
#include <span>
#include <vector>

#include "chirpmem/dynamics.hpp"
#include "chirpmem/pulses.hpp"

namespace chirpmem {

/// Inhomogeneous line shape g(Delta), normalized to unit area.
class SpectralDistribution {
public:
    enum class Kind { uniform, gaussian, tabulated };

    /// Flat between lo and hi.
    static SpectralDistribution uniform(double lo, double hi);
    /// Centered Gaussian with standard deviation sigma, cut at +-8 sigma.
    static SpectralDistribution gaussian(double sigma, double center = 0.0);
    /// Piecewise-linear density through (delta, weight) samples; the
    /// weights are rescaled to unit area.  Deltas must be increasing.
    static SpectralDistribution tabulated(std::vector<double> deltas, std::vector<double> weights);

    Kind kind() const { return kind_; }
    double density(double delta) const;
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

private:
    Kind kind_ = Kind::uniform;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double center_ = 0.0;
    double sigma_ = 0.0;
    double scale_ = 0.0;
    std::vector<double> table_x_;
    std::vector<double> table_y_;
};

/// Nodes and weights with sum_i w_i f(Delta_i) ~ integral g(Delta) f(Delta).
struct SpectralQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    /// |sum of raw weights - 1| before renormalization.
    double normalization_error = 0.0;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre panels over the support: `nodes` points split evenly into
/// `panels` panels (nodes must be a multiple of panels).  The weights are
/// renormalized to sum to exactly one.
SpectralQuadrature make_quadrature(const SpectralDistribution& g, std::size_t nodes = 201, std::size_t panels = 1);

struct EnsembleSpec {
    SpectralDistribution distribution = SpectralDistribution::uniform(-20.0, 20.0);
    double sigma_s = 0.0;  ///< signal bandwidth bound [rad/time]
    std::vector<double> grid;
};

/// Evenly spaced points lo, ..., hi (count >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct PopulationRow {
    double delta;
    double p1;
    double p2;
    double p3;
    bool ok;  ///< false if the integrator failed; populations are NaN then
};

/// Populations after three copies of `pulse` centered at `centers`, starting
/// from |1>.  Free evolution between windows is exact.  The template's
/// detuning is replaced by each grid value.
std::vector<PopulationRow> final_populations_scan(const ChirpedPulse& pulse, const std::array<double, 3>& centers,
                                                  const AtomParams& params_template,
                                                  std::span<const double> delta_grid,
                                                  const IntegratorOptions& options = {}, unsigned workers = 1);

struct JointProbabilityPoint {
    double tau_p;
    double mu;  ///< dimensionless chirp parameter
    double p_joint;
};

/// P_joint over a (tau_p, mu/tau_p) grid at Delta = 0, D = 1 with
/// A0 = 20 / tau_p and delta0 = -omega_R / 2.  Rows are ordered with tau_p
/// outermost.  Positive-chirp points use the transposed permutation.
std::vector<JointProbabilityPoint> joint_probability_map(std::span<const double> tau_grid,
                                                         std::span<const double> chirp_range_grid,
                                                         double omega_r, const IntegratorOptions& options = {},
                                                         unsigned workers = 1);

/// Pulse used at one point of joint_probability_map.
ChirpedPulse joint_map_pulse(double tau_p, double chirp_range, double omega_r);

/// Half-width of the rephasable window measured from Delta = 0 minus
/// sigma_s.  Positive when the whole signal band [-sigma_s, sigma_s] is
/// crossed by both resonances.
double bandwidth_margin(const ChirpedPulse& pulse, double omega_r, double sigma_s);

}  // namespace chirpmem
