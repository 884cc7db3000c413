#include "chirpmem/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <gsl/gsl_integration.h>

#include "chirpmem/adiabatic.hpp"
#include "chirpmem/parallel.hpp"

namespace chirpmem {

SpectralDistribution SpectralDistribution::uniform(double lo, double hi)
{
    if (!(hi > lo)) {
        throw InvalidArgument("uniform distribution needs lo < hi");
    }
    SpectralDistribution g;
    g.kind_ = Kind::uniform;
    g.lo_ = lo;
    g.hi_ = hi;
    g.scale_ = 1.0 / (hi - lo);
    return g;
}

SpectralDistribution SpectralDistribution::gaussian(double sigma, double center)
{
    if (!(sigma > 0.0)) {
        throw InvalidArgument("gaussian distribution needs sigma > 0");
    }
    SpectralDistribution g;
    g.kind_ = Kind::gaussian;
    g.center_ = center;
    g.sigma_ = sigma;
    g.lo_ = center - 8.0 * sigma;
    g.hi_ = center + 8.0 * sigma;
    g.scale_ = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    return g;
}

SpectralDistribution SpectralDistribution::tabulated(std::vector<double> deltas, std::vector<double> weights)
{
    if (deltas.size() < 2 || deltas.size() != weights.size()) {
        throw InvalidArgument("tabulated distribution needs >= 2 matching (delta, weight) samples");
    }
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
        if (!(deltas[i + 1] > deltas[i])) {
            throw InvalidArgument("tabulated distribution: deltas must increase");
        }
        area += 0.5 * (weights[i] + weights[i + 1]) * (deltas[i + 1] - deltas[i]);
    }
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; }) || !(area > 0.0)) {
        throw InvalidArgument("tabulated distribution: weights must be non-negative with positive area");
    }
    SpectralDistribution g;
    g.kind_ = Kind::tabulated;
    g.lo_ = deltas.front();
    g.hi_ = deltas.back();
    g.scale_ = 1.0 / area;
    g.table_x_ = std::move(deltas);
    g.table_y_ = std::move(weights);
    return g;
}

double SpectralDistribution::density(double delta) const
{
    if (delta < lo_ || delta > hi_) {
        return 0.0;
    }
    switch (kind_) {
    case Kind::uniform:
        return scale_;
    case Kind::gaussian: {
        const double x = (delta - center_) / sigma_;
        return scale_ * std::exp(-0.5 * x * x);
    }
    case Kind::tabulated: {
        auto it = std::upper_bound(table_x_.begin(), table_x_.end(), delta);
        if (it == table_x_.end()) {
            return scale_ * table_y_.back();
        }
        const std::size_t i = static_cast<std::size_t>(it - table_x_.begin()) - 1;
        const double f = (delta - table_x_[i]) / (table_x_[i + 1] - table_x_[i]);
        return scale_ * ((1.0 - f) * table_y_[i] + f * table_y_[i + 1]);
    }
    }
    return 0.0;
}

SpectralQuadrature make_quadrature(const SpectralDistribution& g, std::size_t nodes, std::size_t panels)
{
    if (panels == 0 || nodes == 0 || nodes % panels != 0) {
        throw InvalidArgument("quadrature node count must be a positive multiple of the panel count");
    }
    const std::size_t per_panel = nodes / panels;
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(per_panel), &gsl_integration_glfixed_table_free);
    if (!table) {
        throw Error("could not allocate Gauss-Legendre table");
    }

    SpectralQuadrature q;
    q.nodes.reserve(nodes);
    q.weights.reserve(nodes);
    const double width = (g.support_hi() - g.support_lo()) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = g.support_lo() + width * static_cast<double>(p);
        const double b = p + 1 == panels ? g.support_hi() : a + width;
        for (std::size_t i = 0; i < per_panel; ++i) {
            double x = 0.0, w = 0.0;
            gsl_integration_glfixed_point(a, b, i, &x, &w, table.get());
            q.nodes.push_back(x);
            q.weights.push_back(w * g.density(x));
        }
    }
    // GSL returns each panel in its own order; keep nodes ascending.
    std::vector<std::size_t> order(q.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q.nodes[a] < q.nodes[b]; });
    SpectralQuadrature sorted;
    for (std::size_t i : order) {
        sorted.nodes.push_back(q.nodes[i]);
        sorted.weights.push_back(q.weights[i]);
    }

    double sum = 0.0;
    for (double w : sorted.weights) {
        sum += w;
    }
    sorted.normalization_error = std::abs(sum - 1.0);
    for (double& w : sorted.weights) {
        w /= sum;
    }
    return sorted;
}

std::vector<double> linspace(double lo, double hi, std::size_t count)
{
    if (count < 2) {
        throw InvalidArgument("linspace needs at least two points");
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = hi;
    return out;
}

std::vector<PopulationRow> final_populations_scan(const ChirpedPulse& pulse, const std::array<double, 3>& centers,
                                                  const AtomParams& params_template,
                                                  std::span<const double> delta_grid,
                                                  const IntegratorOptions& options, unsigned workers)
{
    pulse.validate();
    for (int i = 0; i < 2; ++i) {
        if (centers[i + 1] - centers[i] < 2.0 * pulse.half_window) {
            throw InvalidArgument("pulse centers closer than two half-windows");
        }
    }
    const ChirpedPulse shape = pulse.centered_at(0.0);
    const ComplexField field = as_field(shape);
    const double gap1 = centers[1] - centers[0] - 2.0 * pulse.half_window;
    const double gap2 = centers[2] - centers[1] - 2.0 * pulse.half_window;

    std::vector<PopulationRow> rows(delta_grid.size());
    parallel_for(delta_grid.size(), workers, [&](std::size_t i) {
        AtomParams params = params_template;
        params.detuning = delta_grid[i];
        try {
            Vector3c v = AtomState::ground().vector();
            const std::array<double, 3> gaps{gap1, gap2, 0.0};
            for (int k = 0; k < 3; ++k) {
                v = integrate_state(AtomState::from(v), params, field, shape.window_begin(), shape.window_end(),
                                    options)
                        .vector();
                v = free_propagator(params, gaps[k]) * v;
            }
            rows[i] = {delta_grid[i], std::norm(v(0)), std::norm(v(1)), std::norm(v(2)), true};
        } catch (const IntegrationError&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rows[i] = {delta_grid[i], nan, nan, nan, false};
        }
    });
    return rows;
}

ChirpedPulse joint_map_pulse(double tau_p, double chirp_range, double omega_r)
{
    return ChirpedPulse::make(20.0 / tau_p, tau_p, -0.5 * omega_r, chirp_range * tau_p);
}

std::vector<JointProbabilityPoint> joint_probability_map(std::span<const double> tau_grid,
                                                         std::span<const double> chirp_range_grid,
                                                         double omega_r, const IntegratorOptions& options,
                                                         unsigned workers)
{
    const std::size_t nm = chirp_range_grid.size();
    std::vector<JointProbabilityPoint> out(tau_grid.size() * nm);
    parallel_for(out.size(), workers, [&](std::size_t idx) {
        const double tau = tau_grid[idx / nm];
        const ChirpedPulse pulse = joint_map_pulse(tau, chirp_range_grid[idx % nm], omega_r);
        const AtomParams params{0.0, omega_r, 1.0};
        const Propagator3 u = pulse_propagator(params, pulse, options);
        out[idx] = {tau, pulse.chirp, joint_probability(u, pulse.chirp_sign())};
    });
    return out;
}

double bandwidth_margin(const ChirpedPulse& pulse, double omega_r, double sigma_s)
{
    const SpectralWindow w = rephasable_window(pulse, omega_r);
    return std::min(w.hi, -w.lo) - sigma_s;
}

}  // namespace chirpmem
