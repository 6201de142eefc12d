#include "autores/hamiltonian.hpp"

#include <cmath>

#include "autores/errors.hpp"

namespace autores {

TransformFrame::TransformFrame(const SeriesCoeffs& series, double tau_)
    : params(series.params()), tau(tau_), s(0.0), ref(), a(0.0), da(0.0), sin_ref(0.0), cos_ref(0.0) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("transformed variables require tau > 0");
    ref = eval_reference_full(series, tau);
    const double lt = params.lambda * tau;
    s = std::sqrt(lt);
    a = 1.0 + ref.r_offset / lt;
    da = ((ref.dr - params.lambda) - ref.r_offset / tau) / lt;
    sin_ref = std::sin(ref.psi);
    cos_ref = std::cos(ref.psi);
}

namespace {

// Differences about Psi_-, written as products so they stay accurate for small Psi.
struct PhaseDiffs {
    double sin_phi;
    double cos_diff;  ///< cos(Psi + Psi_-) - cos(Psi_-)
    double sin_diff;  ///< sin(Psi + Psi_-) - sin(Psi_-)
};

PhaseDiffs phase_diffs(const TransformFrame& fr, double Psi) {
    const double half = std::sin(0.5 * Psi);
    const double mid = fr.ref.psi + 0.5 * Psi;
    return {std::sin(fr.ref.psi + Psi), -2.0 * std::sin(mid) * half, 2.0 * std::cos(mid) * half};
}

}  // namespace

HamiltonianTerms hamiltonian_terms(const TransformFrame& fr, double R, double Psi) {
    const PhaseDiffs d = phase_diffs(fr, Psi);
    const double f = fr.params.f;
    const double bracket = d.cos_diff + Psi * fr.sin_ref;
    const double fRs = f * R / fr.s;

    HamiltonianTerms h;
    h.value = 0.5 * R * R + fr.a * bracket + fRs * d.cos_diff;
    h.d_R = R + (f / fr.s) * d.cos_diff;
    h.d_Psi = -fr.a * d.sin_diff - fRs * d.sin_phi;
    h.d_tau = fr.da * bracket + fr.a * fr.ref.dpsi * (-d.sin_diff + Psi * fr.cos_ref) -
              fRs / (2.0 * fr.tau) * d.cos_diff - fRs * fr.ref.dpsi * d.sin_diff;
    return h;
}

double non_hamiltonian_part(const TransformFrame& fr, double R, double Psi) {
    const double sin_phi = std::sin(fr.ref.psi + Psi);
    return -(R / fr.s) * (fr.params.delta + (fr.params.f - 1.0) * sin_phi) - R / (2.0 * fr.tau * fr.s);
}

HamiltonianTerms lyapunov_terms(const TransformFrame& fr, double R, double Psi) {
    HamiltonianTerms v = hamiltonian_terms(fr, R, Psi);
    const double m = fr.params.m();
    const double w = 0.5 * m / std::sqrt(fr.tau);
    v.value += w * R * Psi;
    v.d_R += w * Psi;
    v.d_Psi += w * R;
    v.d_tau -= 0.5 * w * R * Psi / fr.tau;
    return v;
}

PerturbationForcing perturbation_forcing(const TransformFrame& fr, double R, double Psi,
                                         const PerturbationValues& pv) {
    const double phi = fr.ref.psi + Psi;
    const double r = fr.ref.r + R * fr.s;
    return {r * std::sin(phi) * pv.xi / (fr.s * fr.s), (pv.eta * std::cos(phi) + pv.zeta) / fr.s};
}

double hamiltonian(const TransformedState& ts, double tau, const SeriesCoeffs& ref) {
    return hamiltonian_terms(TransformFrame(ref, tau), ts.R, ts.Psi).value;
}

double non_hamiltonian_F(const TransformedState& ts, double tau, const SeriesCoeffs& ref) {
    return non_hamiltonian_part(TransformFrame(ref, tau), ts.R, ts.Psi);
}

}  // namespace autores
