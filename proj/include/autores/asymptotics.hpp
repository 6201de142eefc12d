#pragma once

// Power-series asymptotic autoresonant solutions
//   R(tau)   = lambda tau + sum_j r_j tau^-j
//   Psi(tau) = sum_j psi_j tau^-j
// of the averaged system, for both roots of sin(psi_0) = delta.

#include <string_view>
#include <vector>

#include "autores/model.hpp"

namespace autores {

enum class Branch { plus, minus };

std::string_view to_string(Branch b);
Branch branch_from_string(std::string_view s);

inline constexpr int kMaxSeriesOrder = 8;
inline constexpr double kConditioningLimit = 1e8;

struct LeadingCoeffs {
    double psi0 = 0.0;
    double r0 = 0.0;
    double psi1 = 0.0;
    double r1 = 0.0;
};

/// Closed-form leading coefficients: sin(psi0) = delta,
/// psi1 = 1/cos(psi0), r0 = -f cos(psi0), r1 = f tan(psi0).
/// Throws DomainError unless 0 < delta < 1.
LeadingCoeffs leading_coeffs(const ModelParams& params, Branch branch);

/// Truncated coefficient set of one branch. Immutable after construction.
class SeriesCoeffs {
public:
    SeriesCoeffs(Branch branch, ModelParams params, std::vector<double> r_coeffs,
                 std::vector<double> psi_coeffs);

    [[nodiscard]] Branch branch() const { return branch_; }
    [[nodiscard]] int order() const { return static_cast<int>(r_.size()) - 1; }
    [[nodiscard]] const std::vector<double>& r_coeffs() const { return r_; }
    [[nodiscard]] const std::vector<double>& psi_coeffs() const { return psi_; }
    [[nodiscard]] const ModelParams& params() const { return params_; }

    /// cos(psi_0) taken from delta directly (-sigma on the minus branch, +sigma on plus),
    /// so that sin(psi_0) = delta holds without rounding.
    [[nodiscard]] double cos_psi0() const;

    /// True when some |coefficient| exceeds kConditioningLimit (delta close to 1).
    [[nodiscard]] bool conditioning_warning() const;

    /// Same branch and parameters, coefficients through order j only.
    [[nodiscard]] SeriesCoeffs truncated(int j) const;

private:
    Branch branch_;
    ModelParams params_;
    std::vector<double> r_;
    std::vector<double> psi_;
};

/// Solves the order-by-order matching of the substituted series numerically;
/// each order is a 2x2 linear solve for (psi_k, r_k).
/// Throws DegenerateParameters at delta = 1, DomainError for other delta outside (0,1)
/// or order outside [0, kMaxSeriesOrder].
SeriesCoeffs extend_coeffs(const ModelParams& params, Branch branch, int order);

/// Reference value and its tau-derivative, with the pieces the transformed
/// system needs without re-subtracting large quantities.
struct ReferencePoint {
    double r = 0.0;          ///< R(tau)
    double psi = 0.0;        ///< Psi(tau)
    double r_offset = 0.0;   ///< R(tau) - lambda tau
    double psi_shift = 0.0;  ///< Psi(tau) - psi_0
    double dr = 0.0;         ///< dR/dtau
    double dpsi = 0.0;       ///< dPsi/dtau
};

/// Horner evaluation in 1/tau. Throws DomainError for tau <= 0.
PhaseState eval_reference(const SeriesCoeffs& series, double tau);
ReferencePoint eval_reference_full(const SeriesCoeffs& series, double tau);

/// d/dtau of the truncated series minus the unperturbed right-hand side on it.
/// Evaluated in a cancellation-free form so that residuals far below
/// machine-epsilon * lambda tau remain resolvable.
Vec2 residual(const SeriesCoeffs& series, double tau);

}  // namespace autores
