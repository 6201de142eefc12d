#pragma once

// Model parameters, states and right-hand sides of the averaged
// parametric-resonance system and of the parametrically pumped Duffing
// oscillator it is derived from.

#include <array>
#include <cmath>
#include <functional>
#include <optional>

namespace autores {

using Vec2 = std::array<double, 2>;

/// Parameters (lambda, delta, f) of the averaged system
///   dr/dtau   = r sin(psi) - delta r
///   dpsi/dtau = r - lambda tau + f cos(psi).
struct ModelParams {
    double lambda = 1.0;  ///< sweep-rate factor, > 0
    double delta = 0.5;   ///< dissipation, >= 0
    double f = 0.2;       ///< pumping factor, != 0

    /// sqrt(1 - delta^2); NaN when delta > 1.
    [[nodiscard]] double sigma() const { return std::sqrt(1.0 - delta * delta); }
    /// delta f / sqrt(lambda); the decay constant of the Lyapunov function.
    [[nodiscard]] double m() const { return delta * f / std::sqrt(lambda); }

    /// Throws InvalidInput unless lambda > 0, delta >= 0, f != 0 and all finite.
    void validate() const;
};

/// Slow amplitude r and unwrapped phase psi.
struct PhaseState {
    double r = 0.0;
    double psi = 0.0;

    [[nodiscard]] Vec2 vec() const { return {r, psi}; }
    static PhaseState from(const Vec2& v) { return {v[0], v[1]}; }
};

/// Rescaled deviation from the reference solution:
///   r = R_-(tau) + sqrt(lambda tau) R,  psi = Psi_-(tau) + Psi.
struct TransformedState {
    double R = 0.0;
    double Psi = 0.0;

    [[nodiscard]] double rho() const { return std::hypot(R, Psi); }
    [[nodiscard]] Vec2 vec() const { return {R, Psi}; }
    static TransformedState from(const Vec2& v) { return {v[0], v[1]}; }
};

/// Pointwise values of a perturbation triple.
struct PerturbationValues {
    double xi = 0.0;
    double eta = 0.0;
    double zeta = 0.0;
};

/// Unperturbed right-hand side: (r sin psi - delta r, r - lambda tau + f cos psi).
Vec2 rhs_unperturbed(const PhaseState& state, double tau, const ModelParams& params);

/// Deterministically perturbed system with explicit small parameter mu:
///   ((1 + mu xi) r sin psi - delta r, r - lambda tau + mu zeta + (f + mu eta) cos psi).
Vec2 rhs_perturbed(const PhaseState& state, double tau, const ModelParams& params,
                   const PerturbationValues& pv, double mu);

/// Randomly perturbed system; the path values carry their own smallness.
Vec2 rhs_random(const PhaseState& state, double tau, const ModelParams& params,
                const PerturbationValues& pv);

// ---------------------------------------------------------------------------
// Duffing oscillator  x'' + beta x' + (1 + eps (1 + mu a) cos(phi0 + mu phi)) x + gamma x^3 = 0
// with phi0(t) = 2t + alpha t^2.
// ---------------------------------------------------------------------------

struct DuffingParams {
    double beta = 0.0;    ///< damping
    double gamma = 1.5;   ///< cubic stiffness, > 0
    double eps = 0.01;    ///< pump amplitude
    double alpha = 1.25e-5;  ///< chirp rate

    /// 2 / (3 gamma)
    [[nodiscard]] double kappa() const { return 2.0 / (3.0 * gamma); }
    /// Averaging map: lambda = 8 alpha / eps^2, delta = 2 beta / eps, f = 1.
    [[nodiscard]] ModelParams averaged() const {
        return {8.0 * alpha / (eps * eps), 2.0 * beta / eps, 1.0};
    }
    /// Pump phase phi0(t) = 2t + alpha t^2.
    [[nodiscard]] double pump_phase(double t) const { return 2.0 * t + alpha * t * t; }

    void validate() const;
};

/// Amplitude and phase perturbation of the pump, as functions of t.
struct DuffingPumpPerturbation {
    std::function<double(double)> amplitude;  ///< a(t)
    std::function<double(double)> phase;      ///< phi(t)
};

/// Returns (dx/dt, dv/dt).
Vec2 duffing_rhs(double x, double v, double t, const DuffingParams& dp, double mu = 0.0,
                 const DuffingPumpPerturbation* pert = nullptr);

/// Leading-order oscillation amplitude sqrt(kappa eps r) for slow energy r.
double duffing_envelope(double r, const DuffingParams& dp);

}  // namespace autores
