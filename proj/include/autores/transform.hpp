#pragma once

// Change of variables between (r, psi) and the rescaled deviation (R, Psi)
// from a reference series solution, and the transformed vector field.

#include "autores/asymptotics.hpp"
#include "autores/model.hpp"

namespace autores {

/// R = (r - R_-(tau)) / sqrt(lambda tau), Psi = psi - Psi_-(tau).
/// Throws DomainError for tau <= 0.
TransformedState to_transformed(const PhaseState& state, double tau, const SeriesCoeffs& ref);

/// Exact inverse of to_transformed.
PhaseState from_transformed(const TransformedState& ts, double tau, const SeriesCoeffs& ref);

/// (dR/dtau, dPsi/dtau) = sqrt(lambda tau) (-dH/dPsi + F, dH/dR).
Vec2 rhs_transformed(const TransformedState& ts, double tau, const SeriesCoeffs& ref);

/// Transformed field of the deterministically perturbed system:
/// adds sqrt(lambda tau) mu (G, Q).
Vec2 rhs_transformed_perturbed(const TransformedState& ts, double tau, const SeriesCoeffs& ref,
                               const PerturbationValues& pv, double mu);

/// Exact pushforward of the unperturbed field through the change of variables,
/// including the mismatch caused by the truncated reference. Differs from
/// rhs_transformed only by the reference residual.
Vec2 pushforward_unperturbed(const TransformedState& ts, double tau, const SeriesCoeffs& ref);

}  // namespace autores
