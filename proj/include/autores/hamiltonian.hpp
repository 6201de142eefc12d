#pragma once

// Near-Hamiltonian form of the averaged system about the minus-branch
// reference solution:
//   (lambda tau)^-1/2 dR/dtau   = -dH/dPsi + F
//   (lambda tau)^-1/2 dPsi/dtau =  dH/dR
// and the Lyapunov function V = H + (m/2) R Psi tau^-1/2 built on it.

#include "autores/asymptotics.hpp"
#include "autores/model.hpp"

namespace autores {

/// Everything about the reference solution at a fixed tau that H, F and V need.
struct TransformFrame {
    TransformFrame(const SeriesCoeffs& ref, double tau);

    ModelParams params;
    double tau;
    double s;          ///< sqrt(lambda tau)
    ReferencePoint ref;
    double a;          ///< R_-(tau) / (lambda tau)
    double da;         ///< d/dtau of a
    double sin_ref;    ///< sin(Psi_-)
    double cos_ref;    ///< cos(Psi_-)
};

struct HamiltonianTerms {
    double value = 0.0;
    double d_R = 0.0;
    double d_Psi = 0.0;
    double d_tau = 0.0;
};

/// H and its analytic partial derivatives.
HamiltonianTerms hamiltonian_terms(const TransformFrame& frame, double R, double Psi);

/// Non-Hamiltonian part
///   F = -(R / sqrt(lambda tau)) [delta + (f - 1) sin(Psi + Psi_-)] - R / (2 tau sqrt(lambda tau)).
double non_hamiltonian_part(const TransformFrame& frame, double R, double Psi);

/// Lyapunov function and its partials (same layout as HamiltonianTerms).
HamiltonianTerms lyapunov_terms(const TransformFrame& frame, double R, double Psi);

/// Contributions of a perturbation to the transformed system, per unit mu:
///   G = (R_- + R s) sin(Psi + Psi_-) xi / (lambda tau)
///   Q = (eta cos(Psi + Psi_-) + zeta) / s
struct PerturbationForcing {
    double G = 0.0;
    double Q = 0.0;
};
PerturbationForcing perturbation_forcing(const TransformFrame& frame, double R, double Psi,
                                         const PerturbationValues& pv);

// Convenience forms taking the transformed state and reference directly.
double hamiltonian(const TransformedState& ts, double tau, const SeriesCoeffs& ref);
double non_hamiltonian_F(const TransformedState& ts, double tau, const SeriesCoeffs& ref);

}  // namespace autores
