#pragma once

// Lyapunov function of the transformed system, its derivative along the
// (optionally perturbed) flow, sampling-based certification of the
// quadratic sandwich and decay inequalities, and branch classification.

#include <complex>
#include <optional>
#include <string>

#include "autores/asymptotics.hpp"
#include "autores/hamiltonian.hpp"
#include "autores/model.hpp"

namespace autores {

double lyapunov_V(const TransformedState& ts, double tau, const SeriesCoeffs& ref);

/// Perturbation acting on the flow: the triple values and the scale mu.
struct FlowPerturbation {
    PerturbationValues values;
    double mu = 0.0;
};

/// dV/dtau = dV/dtau(partial) + sqrt(lambda tau) [V_R (-H_Psi + F + mu G) + V_Psi (H_R + mu Q)].
double lyapunov_derivative(const TransformedState& ts, double tau, const SeriesCoeffs& ref,
                           const std::optional<FlowPerturbation>& pert = std::nullopt);

/// B(rho_max, tau_min) sampled up to tau_max.
struct DomainBox {
    double rho_max = 0.4;
    double tau_min = 10.0;
    double tau_max = 1e5;

    void validate() const;
};

/// Sample counts along the polar angle, radius and log(tau).
struct GridSpec {
    int angles = 64;
    int radii = 64;
    int taus = 32;
    int max_rounds = 8;
};

struct SamplePoint {
    double R = 0.0;
    double Psi = 0.0;
    double tau = 0.0;
    double value = 0.0;  ///< quantity observed there (dV/dtau for witnesses)
};

/// Outcome of certify_domain. Sampling-based, not interval-rigorous.
struct CertificateReport {
    bool certified = false;
    double rho0 = 0.0;
    double tau0 = 0.0;
    double tau_max = 0.0;
    double ell = 0.0;               ///< 1.1 * max(|V_R| + |V_Psi|) on the box
    double decay_margin = 0.0;      ///< min of -dV/dtau / q - m sqrt(lambda) / 4
    double sandwich_lower = 0.0;    ///< min of V / q - 1/4
    double sandwich_upper = 0.0;    ///< min of 3/4 - V / q
    long samples = 0;
    int rounds = 0;
    GridSpec grid;
    std::optional<SamplePoint> witness;  ///< sample with the largest dV/dtau when positive
    std::string diagnosis;
    std::string method = "dense grid sampling (not interval-rigorous)";
};

/// Grid-samples B(rho, tau) and shrinks it (halve rho_max, double tau_min) until
///   1/4 q <= V <= 3/4 q  and  dV/dtau <= -(m sqrt(lambda) / 4) q,   q = R^2 + sigma Psi^2,
/// hold at every sample. Failure is reported, never thrown.
CertificateReport certify_domain(const SeriesCoeffs& ref, const DomainBox& box,
                                 const GridSpec& grid = {}, int workers = 1);

/// Builds the minus-branch reference of the given order and certifies it.
/// delta = 0 has m = 0, so no decay margin exists; that case is reported as
/// not certified without constructing a series. Throws DomainError for delta
/// outside [0, 1).
CertificateReport certify_domain(const ModelParams& params, const DomainBox& box,
                                 const GridSpec& grid = {}, int workers = 1,
                                 int reference_order = 2);

enum class BranchStability { asymptotically_stable, unstable, inconclusive };

std::string_view to_string(BranchStability s);

struct BranchClassification {
    BranchStability stability = BranchStability::inconclusive;
    std::complex<double> eigen_a;  ///< eigenvalues of the linearization at tau_probe
    std::complex<double> eigen_b;
    double tau_probe = 0.0;
};

/// Plus branch: linearization about the leading asymptotics at tau_probe.
/// Minus branch: sign of f. delta = 0: inconclusive. Throws DomainError for delta outside [0,1).
BranchClassification classify_branch(const ModelParams& params, Branch branch,
                                     double tau_probe = 1e3);

}  // namespace autores
