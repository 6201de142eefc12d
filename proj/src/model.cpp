#include "autores/model.hpp"

#include <cmath>
#include <string>

#include "autores/errors.hpp"

namespace autores {

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite input");
}

}  // namespace

void ModelParams::validate() const {
    require_finite({lambda, delta, f}, "ModelParams");
    if (!(lambda > 0.0)) throw InvalidInput("ModelParams: lambda must be positive");
    if (!(delta >= 0.0)) throw InvalidInput("ModelParams: delta must be nonnegative");
    if (f == 0.0) throw InvalidInput("ModelParams: f must be nonzero");
}

void DuffingParams::validate() const {
    require_finite({beta, gamma, eps, alpha}, "DuffingParams");
    if (!(beta >= 0.0)) throw InvalidInput("DuffingParams: beta must be nonnegative");
    if (!(gamma > 0.0)) throw InvalidInput("DuffingParams: gamma must be positive");
    if (!(eps > 0.0)) throw InvalidInput("DuffingParams: eps must be positive");
    if (!(alpha > 0.0)) throw InvalidInput("DuffingParams: alpha must be positive");
}

Vec2 rhs_unperturbed(const PhaseState& state, double tau, const ModelParams& params) {
    require_finite({state.r, state.psi, tau}, "rhs_unperturbed");
    return {state.r * std::sin(state.psi) - params.delta * state.r,
            state.r - params.lambda * tau + params.f * std::cos(state.psi)};
}

Vec2 rhs_perturbed(const PhaseState& state, double tau, const ModelParams& params,
                   const PerturbationValues& pv, double mu) {
    require_finite({state.r, state.psi, tau, pv.xi, pv.eta, pv.zeta, mu}, "rhs_perturbed");
    if (mu < 0.0) throw InvalidInput("rhs_perturbed: mu must be nonnegative");
    return {(1.0 + mu * pv.xi) * state.r * std::sin(state.psi) - params.delta * state.r,
            state.r - params.lambda * tau + mu * pv.zeta + (params.f + mu * pv.eta) * std::cos(state.psi)};
}

Vec2 rhs_random(const PhaseState& state, double tau, const ModelParams& params,
                const PerturbationValues& pv) {
    require_finite({state.r, state.psi, tau, pv.xi, pv.eta, pv.zeta}, "rhs_random");
    return {(1.0 + pv.xi) * state.r * std::sin(state.psi) - params.delta * state.r,
            state.r - params.lambda * tau + pv.zeta + (params.f + pv.eta) * std::cos(state.psi)};
}

Vec2 duffing_rhs(double x, double v, double t, const DuffingParams& dp, double mu,
                 const DuffingPumpPerturbation* pert) {
    require_finite({x, v, t, mu}, "duffing_rhs");
    double a = 0.0;
    double phi = 0.0;
    if (pert != nullptr && mu != 0.0) {
        if (pert->amplitude) a = pert->amplitude(t);
        if (pert->phase) phi = pert->phase(t);
    }
    const double pump = 1.0 + dp.eps * (1.0 + mu * a) * std::cos(dp.pump_phase(t) + mu * phi);
    return {v, -dp.beta * v - pump * x - dp.gamma * x * x * x};
}

double duffing_envelope(double r, const DuffingParams& dp) {
    if (!(r >= 0.0)) throw DomainError("duffing_envelope: r must be nonnegative");
    return std::sqrt(dp.kappa() * dp.eps * r);
}

}  // namespace autores
