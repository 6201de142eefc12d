#include "autores/transform.hpp"

#include <cmath>

#include "autores/errors.hpp"
#include "autores/hamiltonian.hpp"

namespace autores {

TransformedState to_transformed(const PhaseState& state, double tau, const SeriesCoeffs& ref) {
    if (!(tau > 0.0)) throw DomainError("to_transformed requires tau > 0");
    const ReferencePoint p = eval_reference_full(ref, tau);
    return {(state.r - p.r) / std::sqrt(ref.params().lambda * tau), state.psi - p.psi};
}

PhaseState from_transformed(const TransformedState& ts, double tau, const SeriesCoeffs& ref) {
    if (!(tau > 0.0)) throw DomainError("from_transformed requires tau > 0");
    const ReferencePoint p = eval_reference_full(ref, tau);
    return {p.r + std::sqrt(ref.params().lambda * tau) * ts.R, p.psi + ts.Psi};
}

Vec2 rhs_transformed(const TransformedState& ts, double tau, const SeriesCoeffs& ref) {
    const TransformFrame fr(ref, tau);
    const HamiltonianTerms h = hamiltonian_terms(fr, ts.R, ts.Psi);
    const double F = non_hamiltonian_part(fr, ts.R, ts.Psi);
    return {fr.s * (-h.d_Psi + F), fr.s * h.d_R};
}

Vec2 rhs_transformed_perturbed(const TransformedState& ts, double tau, const SeriesCoeffs& ref,
                               const PerturbationValues& pv, double mu) {
    if (mu < 0.0) throw InvalidInput("rhs_transformed_perturbed: mu must be nonnegative");
    const TransformFrame fr(ref, tau);
    const HamiltonianTerms h = hamiltonian_terms(fr, ts.R, ts.Psi);
    const double F = non_hamiltonian_part(fr, ts.R, ts.Psi);
    const PerturbationForcing g = perturbation_forcing(fr, ts.R, ts.Psi, pv);
    return {fr.s * (-h.d_Psi + F + mu * g.G), fr.s * (h.d_R + mu * g.Q)};
}

Vec2 pushforward_unperturbed(const TransformedState& ts, double tau, const SeriesCoeffs& ref) {
    // r = R_-(tau) + s R, psi = Psi_-(tau) + Psi, s = sqrt(lambda tau):
    //   dR/dtau = (dr/dtau - R_-' - s' R) / s,  dPsi/dtau = dpsi/dtau - Psi_-'.
    if (!(tau > 0.0)) throw DomainError("pushforward_unperturbed requires tau > 0");
    const ModelParams& prm = ref.params();
    const ReferencePoint p = eval_reference_full(ref, tau);
    const double s = std::sqrt(prm.lambda * tau);
    const PhaseState x{p.r + s * ts.R, p.psi + ts.Psi};
    const Vec2 v = rhs_unperturbed(x, tau, prm);
    const double ds = 0.5 * prm.lambda / s;
    return {(v[0] - p.dr - ds * ts.R) / s, v[1] - p.dpsi};
}

}  // namespace autores
