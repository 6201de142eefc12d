#include "autores/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "autores/errors.hpp"
#include "autores/transform.hpp"

namespace autores {

std::string_view to_string(IntegratorMethod m) {
    return m == IntegratorMethod::fixed_rk4 ? "fixed_rk4" : "embedded_rk45";
}

IntegratorMethod integrator_method_from_string(std::string_view s) {
    if (s == "fixed_rk4") return IntegratorMethod::fixed_rk4;
    if (s == "embedded_rk45") return IntegratorMethod::embedded_rk45;
    throw ConfigError("unknown integrator method '" + std::string(s) + "'");
}

void IntegratorConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
    if (!(h_init > 0.0) || !(h_max > 0.0)) throw ConfigError("integrator step sizes must be positive");
    if (max_steps < 1) throw ConfigError("integrator max_steps must be at least 1");
}

std::string_view to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::completed: return "completed";
        case TrajectoryStatus::escaped: return "escaped";
        case TrajectoryStatus::validity_violation: return "validity_violation";
        case TrajectoryStatus::step_limit: return "step_limit";
    }
    return "completed";
}

std::string_view to_string(BasinClass c) {
    switch (c) {
        case BasinClass::captured: return "captured";
        case BasinClass::bounded: return "bounded";
        case BasinClass::failed: return "failed";
    }
    return "failed";
}

// ---------------------------------------------------------------------------
// Vector fields

PiecewiseField PiecewiseField::smooth(VectorField<2> f) {
    return {[f = std::move(f)](double tau, const Vec2& y, double) { return f(tau, y); }, {}};
}

PiecewiseField unperturbed_field(const ModelParams& params) {
    params.validate();
    return PiecewiseField::smooth(
        [params](double tau, const Vec2& y) { return rhs_unperturbed(PhaseState::from(y), tau, params); });
}

PiecewiseField deterministic_field(const ModelParams& params, DeterministicPert pert, double mu) {
    params.validate();
    if (!(mu >= 0.0)) throw InvalidInput("deterministic_field: mu must be nonnegative");
    return PiecewiseField::smooth([params, pert = std::move(pert), mu](double tau, const Vec2& y) {
        return rhs_perturbed(PhaseState::from(y), tau, params, pert(y[0], y[1], tau), mu);
    });
}

PiecewiseField random_field(const ModelParams& params, RandomPertPath path) {
    params.validate();
    std::vector<double> bps = path.breakpoints();
    return {[params, path = std::move(path)](double tau, const Vec2& y, double active) {
                return rhs_random(PhaseState::from(y), tau, params, path.values_with(tau, active));
            },
            std::move(bps)};
}

PiecewiseField transformed_field(SeriesCoeffs ref, std::optional<DeterministicPert> pert, double mu) {
    if (!pert) {
        return PiecewiseField::smooth([ref = std::move(ref)](double tau, const Vec2& y) {
            return rhs_transformed(TransformedState::from(y), tau, ref);
        });
    }
    return PiecewiseField::smooth([ref = std::move(ref), pert = std::move(*pert), mu](double tau, const Vec2& y) {
        const TransformedState ts = TransformedState::from(y);
        const PhaseState x = from_transformed(ts, tau, ref);
        return rhs_transformed_perturbed(ts, tau, ref, pert(x.r, x.psi, tau), mu);
    });
}

IntegrationOutcome integrate_piecewise(const PiecewiseField& field, Vec2 y0, double t0, double t1,
                                       const IntegratorConfig& cfg, const StepObserver<2>& observer) {
    cfg.validate();
    if (!(t0 < t1)) throw DomainError("integrate: require t0 < t1");
    std::vector<double> cuts{t0};
    for (double b : field.breakpoints)
        if (b > t0 && b < t1) cuts.push_back(b);
    cuts.push_back(t1);

    long used = 0;
    Vec2 y = y0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const double mid = 0.5 * (a + b);
        const VectorField<2> f = [&field, mid](double t, const Vec2& s) { return field.eval(t, s, mid); };
        IntegratorConfig seg = cfg;
        seg.max_steps = cfg.max_steps - used;
        if (seg.max_steps < 1) return IntegrationOutcome::step_limit;
        long steps = 0;
        const StepObserver<2> wrap = [&](const StepView<2>& v) {
            y = v.y1;
            return observer ? observer(v) : true;
        };
        const IntegrationOutcome out = integrate_steps<2>(f, y, a, b, seg, wrap, {}, &steps);
        used += steps;
        if (out != IntegrationOutcome::completed) return out;
    }
    return IntegrationOutcome::completed;
}

BasicTrajectory<Vec2> integrate(const PiecewiseField& field, Vec2 initial, double t0, double t1,
                                const IntegratorConfig& cfg, std::span<const double> output_grid) {
    BasicTrajectory<Vec2> traj;
    std::size_t next = 0;
    if (output_grid.empty()) {
        traj.times.push_back(t0);
        traj.states.push_back(initial);
    } else {
        if (!std::is_sorted(output_grid.begin(), output_grid.end()))
            throw InvalidInput("integrate: output grid must be sorted");
        while (next < output_grid.size() && output_grid[next] < t0) ++next;
        if (next < output_grid.size() && output_grid[next] == t0) {
            traj.times.push_back(t0);
            traj.states.push_back(initial);
            ++next;
        }
    }
    const StepObserver<2> obs = [&](const StepView<2>& v) {
        if (output_grid.empty()) {
            traj.times.push_back(v.t1);
            traj.states.push_back(v.y1);
        } else {
            while (next < output_grid.size() && output_grid[next] <= v.t1) {
                const double t = output_grid[next++];
                traj.times.push_back(t);
                traj.states.push_back(t == v.t1 ? v.y1 : v.at(t));
            }
        }
        return true;
    };
    const IntegrationOutcome out = integrate_piecewise(field, initial, t0, t1, cfg, obs);
    traj.status = out == IntegrationOutcome::step_limit ? TrajectoryStatus::step_limit : TrajectoryStatus::completed;
    return traj;
}

// ---------------------------------------------------------------------------
// Escape detection

double deviation_norm(const PhaseState& state, double tau, const SeriesCoeffs& ref, DeviationWeight weight) {
    if (!(tau > 0.0)) throw DomainError("deviation_norm requires tau > 0");
    const PhaseState p = eval_reference(ref, tau);
    const double w = weight == DeviationWeight::tau ? 1.0 / std::sqrt(tau)
                                                    : 1.0 / std::sqrt(ref.params().lambda * tau);
    return std::abs(state.r - p.r) * w + std::abs(state.psi - p.psi);
}

Trajectory integrate_until_escape(const PiecewiseField& field, PhaseState initial, double tau0, double horizon,
                                  double epsilon, const SeriesCoeffs& ref, const IntegratorConfig& cfg,
                                  const EscapeOptions& opts) {
    if (!(epsilon > 0.0)) throw InvalidInput("integrate_until_escape: epsilon must be positive");
    if (!(horizon > tau0)) throw DomainError("integrate_until_escape: horizon must exceed tau0");
    if (!(tau0 > 0.0)) throw DomainError("integrate_until_escape: tau0 must be positive");
    if (!(opts.bracket_width > 0.0)) throw InvalidInput("integrate_until_escape: bracket width must be positive");

    Trajectory traj;
    traj.times.push_back(tau0);
    traj.states.push_back(initial);
    auto norm = [&](const Vec2& y, double t) { return deviation_norm(PhaseState::from(y), t, ref, opts.weight); };

    traj.max_norm = norm(initial.vec(), tau0);
    if (traj.max_norm > epsilon) {
        traj.status = TrajectoryStatus::escaped;
        traj.escape_time = tau0;
        return traj;
    }
    if (initial.r < 0.0) {
        traj.status = TrajectoryStatus::validity_violation;
        return traj;
    }

    // Interior probes of each step's Hermite interpolant, then the endpoint.
    constexpr std::array<double, 4> probes{0.25, 0.5, 0.75, 1.0};
    double last_t = tau0;
    Vec2 last_y = initial.vec();
    const StepObserver<2> obs = [&](const StepView<2>& v) {
        double prev_t = v.t0;
        for (double frac : probes) {
            const double t = frac == 1.0 ? v.t1 : v.t0 + frac * (v.t1 - v.t0);
            const Vec2 y = frac == 1.0 ? v.y1 : v.at(t);
            const double n = norm(y, t);
            traj.max_norm = std::max(traj.max_norm, n);
            if (n > epsilon) {
                double lo = prev_t;
                double hi = t;
                while (hi - lo > opts.bracket_width) {
                    const double mid = 0.5 * (lo + hi);
                    if (norm(v.at(mid), mid) > epsilon) hi = mid;
                    else lo = mid;
                }
                traj.status = TrajectoryStatus::escaped;
                traj.escape_time = hi;
                traj.escape_bracket = std::make_pair(lo, hi);
                traj.times.push_back(hi);
                traj.states.push_back(PhaseState::from(hi == v.t1 ? v.y1 : v.at(hi)));
                return false;
            }
            if (y[0] < 0.0) {
                traj.status = TrajectoryStatus::validity_violation;
                traj.times.push_back(t);
                traj.states.push_back(PhaseState::from(y));
                return false;
            }
            prev_t = t;
        }
        last_t = v.t1;
        last_y = v.y1;
        if (opts.record) {
            traj.times.push_back(v.t1);
            traj.states.push_back(PhaseState::from(v.y1));
        }
        return true;
    };

    const IntegrationOutcome out = integrate_piecewise(field, initial.vec(), tau0, horizon, cfg, obs);
    if (out == IntegrationOutcome::step_limit) traj.status = TrajectoryStatus::step_limit;
    if (out == IntegrationOutcome::completed && !opts.record) {
        // keep the endpoint even when intermediate steps are not recorded
        traj.times.push_back(last_t);
        traj.states.push_back(PhaseState::from(last_y));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Basin scan

std::vector<std::pair<double, double>> BasinGrid::points() const {
    if (r_count < 1 || psi_count < 1) throw InvalidInput("BasinGrid: counts must be positive");
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < r_count; ++i) {
        const double r = r_count == 1 ? r_lo : r_lo + (r_hi - r_lo) * i / (r_count - 1);
        for (int j = 0; j < psi_count; ++j) {
            const double psi = psi_count == 1 ? psi_lo : psi_lo + (psi_hi - psi_lo) * j / (psi_count - 1);
            pts.emplace_back(r, psi);
        }
    }
    pts.insert(pts.end(), extra_points.begin(), extra_points.end());
    return pts;
}

BasinClass classify_capture(const ModelParams& params, double r0, double psi0, double tau_max,
                            const CaptureCriterion& criterion, const IntegratorConfig& cfg, double* r_final,
                            double* psi_final) {
    params.validate();
    if (!(params.delta < 1.0)) throw DomainError("capture classification needs delta < 1");
    if (!(tau_max > criterion.tau_init)) throw DomainError("basin scan: tau_max must exceed tau_init");
    if (!(r0 >= 0.0)) throw InvalidInput("basin scan: r0 must be nonnegative");

    Vec2 y{r0, psi0};
    try {
        const StepObserver<2> obs = [&](const StepView<2>& v) {
            y = v.y1;
            return true;
        };
        if (integrate_piecewise(unperturbed_field(params), y, criterion.tau_init, tau_max, cfg, obs) !=
            IntegrationOutcome::completed)
            return BasinClass::failed;
    } catch (const StiffnessError&) {
        return BasinClass::failed;
    } catch (const InvalidInput&) {
        return BasinClass::failed;
    }
    if (r_final) *r_final = y[0];
    if (psi_final) *psi_final = y[1];

    const double ratio = y[0] / (params.lambda * tau_max);
    // Phase locking at psi_0 + 2 pi k is the same state; compare the wrapped distance.
    const double target = std::numbers::pi - std::asin(params.delta);
    const double dist = std::abs(std::remainder(y[1] - target, 2.0 * std::numbers::pi));
    const bool captured = ratio >= criterion.ratio_lo && ratio <= criterion.ratio_hi && dist < criterion.phase_window;
    return captured ? BasinClass::captured : BasinClass::bounded;
}

std::vector<BasinCell> basin_scan(const ModelParams& params, const BasinGrid& grid, double tau_max,
                                  const CaptureCriterion& criterion, const IntegratorConfig& cfg, int workers) {
    params.validate();
    cfg.validate();
    const auto pts = grid.points();
    std::vector<BasinCell> cells(pts.size());
    auto run_cell = [&](std::size_t i) {
        BasinCell& c = cells[i];
        c.r0 = pts[i].first;
        c.psi0 = pts[i].second;
        c.r_final = std::numeric_limits<double>::quiet_NaN();
        c.psi_final = std::numeric_limits<double>::quiet_NaN();
        c.cls = classify_capture(params, c.r0, c.psi0, tau_max, criterion, cfg, &c.r_final, &c.psi_final);
    };
    const std::size_t n = cells.size();
    const std::size_t chunks = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(n, 1));
    if (chunks <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_cell(i);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t c = 0; c < chunks; ++c)
            pool.emplace_back([&, c] {
                for (std::size_t i = c; i < n; i += chunks) run_cell(i);
            });
        for (auto& t : pool) t.join();
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Fits and intervals

DecayFit decay_rate_fit(std::span<const double> times, std::span<const double> rho,
                        std::pair<double, double> window) {
    if (times.size() != rho.size()) throw FitError("decay_rate_fit: size mismatch");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window.first || times[i] > window.second) continue;
        if (!(rho[i] > 0.0)) throw FitError("decay_rate_fit: nonpositive rho sample");
        xs.push_back(times[i]);
        ys.push_back(std::log(rho[i]));
    }
    if (xs.size() < 10) throw FitError("decay_rate_fit: fewer than 10 samples in the window");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("decay_rate_fit: degenerate time samples");
    const double slope = sxy / sxx;
    const double icpt = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icpt + slope * xs[i]);
        ss += r * r;
    }
    return {-slope, icpt, std::sqrt(ss / n), static_cast<long>(xs.size())};
}

DecayFit decay_rate_fit(const TransformedTrajectory& traj, std::pair<double, double> window) {
    std::vector<double> rho;
    rho.reserve(traj.states.size());
    for (const auto& s : traj.states) rho.push_back(s.rho());
    return decay_rate_fit(traj.times, rho, window);
}

std::pair<double, double> wilson_interval(long k, long n, double z) {
    if (n <= 0) return {0.0, 1.0};
    if (k < 0 || k > n) throw InvalidInput("wilson_interval: need 0 <= k <= n");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // the bounds are exact at the ends; the formula leaves rounding noise there
    return {k == 0 ? 0.0 : std::max(0.0, center - half), k == n ? 1.0 : std::min(1.0, center + half)};
}

// ---------------------------------------------------------------------------
// Monte Carlo

double MonteCarloConfig::horizon_length() const { return tau0 * std::pow(mu, -kappa); }

void MonteCarloConfig::validate() const {
    params.validate();
    integrator.validate();
    if (n_trials < 1) throw ConfigError("montecarlo: n_trials must be at least 1");
    if (!(mu > 0.0)) throw ConfigError("montecarlo: mu must be positive");
    if (!(kappa > 0.0)) throw ConfigError("montecarlo: kappa must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("montecarlo: epsilon must be positive");
    if (!(tau0 > 0.0)) throw ConfigError("montecarlo: tau0 must be positive");
    if (reference_order < 0 || reference_order > kMaxSeriesOrder)
        throw ConfigError("montecarlo: reference_order out of range");
    if (!std::isfinite(horizon_length())) throw ConfigError("montecarlo: horizon is not finite");
}

MonteCarloReport monte_carlo_escape(const MonteCarloConfig& mc, const PathFactory& factory, double class_kappa0,
                                    int workers) {
    mc.validate();
    if (!(mc.kappa < class_kappa0))
        throw ConfigError("montecarlo: kappa must be below the class horizon exponent kappa0");
    const SeriesCoeffs ref = extend_coeffs(mc.params, Branch::minus, mc.reference_order);
    const double horizon = mc.tau0 + mc.horizon_length();
    const PhaseState start = from_transformed(mc.initial, mc.tau0, ref);

    MonteCarloReport rep;
    rep.n_trials = mc.n_trials;
    rep.horizon = horizon;
    rep.trials.resize(static_cast<std::size_t>(mc.n_trials));

    auto run_trial = [&](long i) {
        TrialOutcome& out = rep.trials[static_cast<std::size_t>(i)];
        out.seed = substream_seed(mc.seed, static_cast<std::uint64_t>(i));
        try {
            const PiecewiseField field = random_field(mc.params, factory(out.seed, mc.mu));
            EscapeOptions opts;
            opts.weight = mc.weight;
            opts.record = false;
            const Trajectory t =
                integrate_until_escape(field, start, mc.tau0, horizon, mc.epsilon, ref, mc.integrator, opts);
            out.status = t.status;
            out.escape_time = t.escape_time;
            out.max_deviation = t.max_norm;
        } catch (const StiffnessError&) {
            out.status = TrajectoryStatus::step_limit;
        } catch (const InvalidInput&) {
            out.status = TrajectoryStatus::validity_violation;
        }
    };

    const long chunks = std::min<long>(mc.n_trials, std::max(1, workers));
    if (chunks == 1) {
        for (long i = 0; i < mc.n_trials; ++i) run_trial(i);
    } else {
        std::vector<std::thread> pool;
        for (long c = 0; c < chunks; ++c)
            pool.emplace_back([&, c] {
                for (long i = c; i < mc.n_trials; i += chunks) run_trial(i);
            });
        for (auto& t : pool) t.join();
    }

    for (const TrialOutcome& t : rep.trials) {
        if (t.status == TrajectoryStatus::escaped) ++rep.n_escaped;
        else if (t.status != TrajectoryStatus::completed) ++rep.n_failed;
    }
    rep.escape_prob = static_cast<double>(rep.n_escaped) / static_cast<double>(rep.n_trials);
    rep.wilson_ci_95 = wilson_interval(rep.n_escaped, rep.n_trials);
    return rep;
}

}  // namespace autores
