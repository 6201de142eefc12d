#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "autores/errors.hpp"
#include "autores/simulation.hpp"

namespace autores {

DuffingComparison duffing_compare(const DuffingParams& dp, double horizon_t, const IntegratorConfig& cfg,
                                  double x0, double v0, double sample_dt) {
    dp.validate();
    cfg.validate();
    if (!(horizon_t > 0.0)) throw InvalidInput("duffing_compare: horizon must be positive");
    if (!(sample_dt > 0.0) || sample_dt >= horizon_t) throw InvalidInput("duffing_compare: bad sample spacing");
    if (!std::isfinite(x0) || !std::isfinite(v0)) throw InvalidInput("duffing_compare: non-finite initial data");

    DuffingComparison out;
    out.averaged_params = dp.averaged();
    if (!(out.averaged_params.delta < 1.0))
        throw DomainError("2 beta / eps >= 1: delta >= 1 and the averaged model has no autoresonant branch");
    out.horizon_t = horizon_t;

    // x = sqrt(kappa eps r) cos((phi0(t) + psi) / 2) with phi0(0) = 0.
    const double amp0 = std::hypot(x0, v0);
    const double theta = std::atan2(-v0, x0);
    out.r0 = amp0 * amp0 / (dp.kappa() * dp.eps);
    out.psi0 = 2.0 * theta - dp.pump_phase(0.0);
    out.initial_amplitude = amp0;

    const auto n = static_cast<std::size_t>(std::floor(horizon_t / sample_dt + 1e-9)) + 1;
    std::vector<double> t_grid(n);
    std::vector<double> tau_grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        t_grid[i] = static_cast<double>(i) * sample_dt;
        tau_grid[i] = 0.5 * dp.eps * t_grid[i];
    }

    // The fast oscillation needs dense output much finer than its period.
    IntegratorConfig fast = cfg;
    fast.h_max = std::min(cfg.h_max, 0.1);
    const PiecewiseField osc = PiecewiseField::smooth(
        [dp](double t, const Vec2& y) { return duffing_rhs(y[0], y[1], t, dp); });
    const auto xs = integrate(osc, {x0, v0}, t_grid.front(), t_grid.back(), fast, t_grid);

    const auto avg = integrate(unperturbed_field(out.averaged_params), {out.r0, out.psi0}, tau_grid.front(),
                               tau_grid.back(), cfg, tau_grid);
    if (xs.status != TrajectoryStatus::completed || avg.status != TrajectoryStatus::completed ||
        xs.states.size() != n || avg.states.size() != n)
        throw StiffnessError("duffing_compare: integration did not reach the horizon");

    out.samples.resize(n);
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        DuffingSample& s = out.samples[i];
        s.t = t_grid[i];
        s.x = xs.states[i][0];
        s.v = xs.states[i][1];
        s.amplitude = std::hypot(s.x, s.v);
        s.averaged_envelope = duffing_envelope(std::max(0.0, avg.states[i][0]), dp);
        prefix[i + 1] = prefix[i] + s.amplitude;
    }

    // Centered moving average over one fast period 2 pi.
    const auto half = static_cast<std::size_t>(std::llround(std::numbers::pi / sample_dt));
    double sup = 0.0;
    double first_smoothed = std::numeric_limits<double>::quiet_NaN();
    double last_smoothed = std::numeric_limits<double>::quiet_NaN();
    double last_env = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        DuffingSample& s = out.samples[i];
        if (i < half || i + half >= n) {
            s.smoothed = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        s.smoothed = (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(2 * half + 1);
        if (std::isnan(first_smoothed)) first_smoothed = s.smoothed;
        last_smoothed = s.smoothed;
        last_env = s.averaged_envelope;
        if (s.averaged_envelope > 0.0) sup = std::max(sup, std::abs(s.smoothed - s.averaged_envelope) / s.averaged_envelope);
    }
    out.sup_rel_error = sup;
    out.final_amplitude = last_smoothed;
    out.final_envelope = last_env;
    out.oscillator_growth = last_smoothed >= 2.0 * first_smoothed;
    out.averaged_growth = out.samples.back().averaged_envelope >= 2.0 * out.samples.front().averaged_envelope;
    return out;
}

}  // namespace autores
