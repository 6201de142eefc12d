#pragma once

// Trajectory integration of the averaged system, escape detection against the
// weighted deviation norm, capture-basin scans, decay-rate fits, Monte Carlo
// escape probabilities and the Duffing-vs-averaged comparison.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "autores/asymptotics.hpp"
#include "autores/integrator.hpp"
#include "autores/model.hpp"
#include "autores/perturbations.hpp"

namespace autores {

/// Vector field that is smooth between breakpoints. `eval(tau, y, tau_active)`
/// evaluates with any discontinuous inputs frozen at their value at tau_active.
struct PiecewiseField {
    std::function<Vec2(double tau, const Vec2& y, double tau_active)> eval;
    std::vector<double> breakpoints;

    static PiecewiseField smooth(VectorField<2> f);
};

PiecewiseField unperturbed_field(const ModelParams& params);
PiecewiseField deterministic_field(const ModelParams& params, DeterministicPert pert, double mu);
PiecewiseField random_field(const ModelParams& params, RandomPertPath path);
/// Transformed (R, Psi) system about `ref`, optionally deterministically perturbed.
PiecewiseField transformed_field(SeriesCoeffs ref, std::optional<DeterministicPert> pert = std::nullopt,
                                 double mu = 0.0);

/// Integrates across the breakpoints of `field`, one smooth segment at a time.
IntegrationOutcome integrate_piecewise(const PiecewiseField& field, Vec2 y0, double t0, double t1,
                                       const IntegratorConfig& cfg, const StepObserver<2>& observer);

enum class TrajectoryStatus { completed, escaped, validity_violation, step_limit };

std::string_view to_string(TrajectoryStatus s);

template <class State>
struct BasicTrajectory {
    std::vector<double> times;
    std::vector<State> states;
    TrajectoryStatus status = TrajectoryStatus::completed;
    std::optional<double> escape_time;
    /// (last time with norm <= epsilon, first time with norm > epsilon)
    std::optional<std::pair<double, double>> escape_bracket;
    double max_norm = 0.0;  ///< largest deviation norm seen (escape runs only)
};

using Trajectory = BasicTrajectory<PhaseState>;
using TransformedTrajectory = BasicTrajectory<TransformedState>;

/// Plain integration. With an output grid the trajectory holds Hermite dense
/// output at those times (within [t0, t1]); otherwise every accepted step.
BasicTrajectory<Vec2> integrate(const PiecewiseField& field, Vec2 initial, double t0, double t1,
                                const IntegratorConfig& cfg, std::span<const double> output_grid = {});

enum class DeviationWeight { tau, lambda_tau };

/// |r - R_-(tau)| w(tau) + |psi - Psi_-(tau)|, w = tau^-1/2 (default) or (lambda tau)^-1/2.
double deviation_norm(const PhaseState& state, double tau, const SeriesCoeffs& ref,
                      DeviationWeight weight = DeviationWeight::tau);

struct EscapeOptions {
    DeviationWeight weight = DeviationWeight::tau;
    double bracket_width = 1e-6;
    bool record = true;  ///< keep accepted steps in the returned trajectory
};

/// Integrates until deviation_norm > epsilon (escaped; escape time bisected on the
/// dense output), r < 0 (validity_violation), or tau reaches `horizon` (completed).
Trajectory integrate_until_escape(const PiecewiseField& field, PhaseState initial, double tau0,
                                  double horizon, double epsilon, const SeriesCoeffs& ref,
                                  const IntegratorConfig& cfg, const EscapeOptions& opts = {});

/// Capture thresholds (config-overridable).
struct CaptureCriterion {
    double ratio_lo = 0.8;
    double ratio_hi = 1.2;
    double phase_window = 1.5707963267948966;
    double tau_init = 0.01;
};

enum class BasinClass { captured, bounded, failed };

std::string_view to_string(BasinClass c);

struct BasinCell {
    double r0 = 0.0;
    double psi0 = 0.0;
    BasinClass cls = BasinClass::failed;
    double r_final = 0.0;
    double psi_final = 0.0;
};

struct BasinGrid {
    double r_lo = 0.0, r_hi = 2.0;
    int r_count = 21;
    double psi_lo = 0.0, psi_hi = 6.283185307179586;
    int psi_count = 21;
    std::vector<std::pair<double, double>> extra_points;  ///< appended after the grid

    [[nodiscard]] std::vector<std::pair<double, double>> points() const;
};

/// Classifies each initial point by r(tau_max) / (lambda tau_max) and the final
/// phase distance to pi - arcsin(delta). Row order follows grid.points().
std::vector<BasinCell> basin_scan(const ModelParams& params, const BasinGrid& grid, double tau_max,
                                  const CaptureCriterion& criterion = {}, const IntegratorConfig& cfg = {},
                                  int workers = 1);

BasinClass classify_capture(const ModelParams& params, double r0, double psi0, double tau_max,
                            const CaptureCriterion& criterion, const IntegratorConfig& cfg,
                            double* r_final = nullptr, double* psi_final = nullptr);

struct DecayFit {
    double rate = 0.0;       ///< fitted l in rho ~ C exp(-l tau)
    double intercept = 0.0;  ///< log C
    double residual_rms = 0.0;
    long samples = 0;
};

/// Least-squares slope of log(rho) on [window.first, window.second].
/// Throws FitError on fewer than 10 samples or any rho <= 0.
DecayFit decay_rate_fit(std::span<const double> times, std::span<const double> rho,
                        std::pair<double, double> window);
DecayFit decay_rate_fit(const TransformedTrajectory& traj, std::pair<double, double> window);

/// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(long k, long n, double z = 1.959963984540054);

struct MonteCarloConfig {
    long n_trials = 100;
    double mu = 0.01;
    double kappa = 0.5;
    double epsilon = 0.1;
    double tau0 = 5.0;
    std::uint64_t seed = 0;
    ModelParams params;
    int reference_order = 2;
    TransformedState initial;  ///< starting offset from the reference at tau0
    IntegratorConfig integrator;
    DeviationWeight weight = DeviationWeight::tau;

    /// tau0 mu^-kappa
    [[nodiscard]] double horizon_length() const;
    void validate() const;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    TrajectoryStatus status = TrajectoryStatus::completed;
    std::optional<double> escape_time;
    double max_deviation = 0.0;
};

struct MonteCarloReport {
    long n_trials = 0;
    long n_escaped = 0;
    long n_failed = 0;  ///< validity violations and step-limit hits
    double escape_prob = 0.0;
    std::pair<double, double> wilson_ci_95{0.0, 0.0};
    double horizon = 0.0;  ///< absolute end time tau0 + tau0 mu^-kappa
    std::vector<TrialOutcome> trials;
};

/// Path factory: (per-trial seed, mu) -> realized path.
using PathFactory = std::function<RandomPertPath(std::uint64_t seed, double mu)>;

/// Runs n_trials paths over (tau0, tau0 + tau0 mu^-kappa). `class_kappa0` bounds kappa.
MonteCarloReport monte_carlo_escape(const MonteCarloConfig& mc, const PathFactory& factory,
                                    double class_kappa0, int workers = 1);

// ---------------------------------------------------------------------------

struct DuffingSample {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
    double amplitude = 0.0;           ///< sqrt(x^2 + v^2)
    double smoothed = 0.0;            ///< amplitude averaged over one 2 pi window (NaN near ends)
    double averaged_envelope = 0.0;   ///< sqrt(kappa eps r(eps t / 2))
};

struct DuffingComparison {
    ModelParams averaged_params;
    double r0 = 0.0;
    double psi0 = 0.0;
    double horizon_t = 0.0;
    double sup_rel_error = 0.0;       ///< over samples with a full smoothing window
    double initial_amplitude = 0.0;
    double final_amplitude = 0.0;     ///< smoothed oscillator amplitude near the horizon
    double final_envelope = 0.0;
    bool oscillator_growth = false;   ///< late amplitude >= 2x early amplitude
    bool averaged_growth = false;
    std::vector<DuffingSample> samples;
};

/// Integrates the oscillator and the averaged system from the same initial data
/// and compares the smoothed oscillation amplitude with sqrt(kappa eps r(tau)).
/// Throws DomainError when 2 beta / eps >= 1 (no autoresonant branch).
DuffingComparison duffing_compare(const DuffingParams& dp, double horizon_t, const IntegratorConfig& cfg,
                                  double x0, double v0, double sample_dt = 0.05);

}  // namespace autores
