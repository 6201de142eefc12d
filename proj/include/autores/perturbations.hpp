#pragma once

// Deterministic perturbation classes D^h_{a,b,c}, random classes R^h_{a,b,c},
// the jump-process examples, and the Duffing pump-perturbation map.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "autores/model.hpp"
#include "autores/random.hpp"

namespace autores {

/// Growth exponents (a, b, c) and class bound h.
struct ClassSpec {
    enum class Kind { deterministic, random };

    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double h = 1.0;
    Kind kind = Kind::deterministic;

    /// max(a + 1/2, b, c)
    [[nodiscard]] double theta() const;
    /// 1/theta, or +infinity in the infinite-interval regime (a <= -1/2, b <= 0, c <= 0).
    [[nodiscard]] double kappa0() const;
    /// |xi| tau^-a + |eta| tau^-b + |zeta| tau^-c
    [[nodiscard]] double weighted_sup_term(const PerturbationValues& pv, double tau) const;
};

/// Perturbation triple as functions of (r, psi, tau).
struct DeterministicPert {
    std::function<PerturbationValues(double r, double psi, double tau)> eval;
    ClassSpec spec;
    std::string name;

    PerturbationValues operator()(double r, double psi, double tau) const { return eval(r, psi, tau); }
};

/// xi = 1, eta = 1, zeta = tau; class (0, 0, 1) with h = 3.
DeterministicPert make_example1();

/// Leading asymptotics of the particular resonant solution under make_example1():
/// r_mu ~ (lambda - mu) tau, psi_mu -> pi - arcsin(delta / (1 + mu)).
struct Example1Drift {
    double slope = 0.0;
    double phase_limit = 0.0;
    double mu = 0.0;

    /// |R_- - r_mu| tau^-1/2 to leading order, i.e. mu tau^1/2.
    [[nodiscard]] double weighted_deviation(double tau) const;
};

/// Throws DomainError unless 0 <= mu < lambda.
Example1Drift example1_drift(const ModelParams& params, double mu);

/// Pulse j on the closed interval [start, end].
struct Pulse {
    double start = 0.0;
    double end = 0.0;
    double amplitude = 0.0;
};

/// One realization of a tau-only random perturbation built from indicator pulses.
/// Component k equals J(tau) * tau^{power_k}, J the sum of active pulses.
class RandomPertPath {
public:
    RandomPertPath() = default;
    RandomPertPath(std::vector<Pulse> pulses, std::array<int, 3> tau_powers, ClassSpec spec,
                   double mu, double nu, std::uint64_t seed);

    /// Identically zero path.
    static RandomPertPath zero(double mu = 1.0);

    [[nodiscard]] double amplitude(double tau) const;  ///< J(tau)
    [[nodiscard]] PerturbationValues values(double tau) const;
    /// Values with J frozen at its value at tau_active; used on a segment between breakpoints.
    [[nodiscard]] PerturbationValues values_with(double tau, double tau_active) const;
    /// S(tau) = 3 |J(tau)|
    [[nodiscard]] double envelope(double tau) const;
    /// M_tau S = integral of S over [tau, tau + 1], exact for the piecewise-constant J.
    [[nodiscard]] double moving_average(double tau) const;
    /// Sorted, de-duplicated pulse endpoints.
    [[nodiscard]] std::vector<double> breakpoints() const;

    [[nodiscard]] const std::vector<Pulse>& pulses() const { return pulses_; }
    [[nodiscard]] const std::array<int, 3>& tau_powers() const { return powers_; }
    [[nodiscard]] const ClassSpec& spec() const { return spec_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] double nu() const { return nu_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
    std::vector<Pulse> pulses_;
    std::array<int, 3> powers_{0, 0, 0};
    ClassSpec spec_;
    double mu_ = 1.0;
    double nu_ = 0.0;
    std::uint64_t seed_ = 0;
};

/// J_N = sum_{n=1..N} j_n chi(n <= tau <= n + mu).
struct JumpTrainSpec {
    int N = 10;
    Distribution jump = Distribution::uniform(-1.0, 1.0);
    double mu = 0.05;

    void validate() const;
};

/// xi = J_N, eta = J_N, zeta = tau J_N; class (0, 0, 1),
/// nu = 3 max_n (|j_n| + |j_{n+1}|) with j_{N+1} = 0.
RandomPertPath sample_jump_train(const JumpTrainSpec& spec, std::uint64_t seed);

/// J = j chi(omega <= tau <= omega + mu); xi = J, eta = tau J, zeta = tau J;
/// class (0, 1, 1), nu = 3 |j|. omega must have positive support.
RandomPertPath sample_single_jump(const Distribution& omega, const Distribution& jump, double mu,
                                  std::uint64_t seed);

/// Finite sampling plan for a sup over (r, psi, tau).
struct SamplePlan {
    double r_max = 1e3;
    int r_samples = 9;
    double psi_lo = -2.0 * 3.141592653589793;
    double psi_hi = 4.0 * 3.141592653589793;
    int psi_samples = 13;
    double tau_min = 1e-2;
    double tau_max = 1e2;
    int tau_samples = 65;

    /// |r| <= 10 lambda tau_max, psi in [-2 pi, 4 pi], log grid in tau.
    static SamplePlan defaults(const ModelParams& params, double tau_max);
    [[nodiscard]] std::string describe() const;
};

struct MembershipReport {
    bool passed = false;
    double sup = 0.0;
    double h = 0.0;
    bool unbounded_trend = false;  ///< sup over the upper half of the tau-grid dominates the lower half
    std::string plan;
};

MembershipReport verify_deterministic_membership(const DeterministicPert& pert, const ClassSpec& spec,
                                                 const SamplePlan& plan);

struct RandomMembershipReport {
    bool envelope_ok = false;        ///< class expression <= S(tau) on the grid
    bool moving_average_ok = false;  ///< M_tau S <= mu nu on the grid
    double max_envelope_excess = 0.0;
    double max_ratio = 0.0;          ///< max of M_tau S / (mu nu) (0 for the zero path)
    long grid_points = 0;

    [[nodiscard]] bool passed() const { return envelope_ok && moving_average_ok; }
};

/// Sliding-grid check of one realized path against `spec` (step defaults to mu / 10).
RandomMembershipReport verify_random_membership(const RandomPertPath& path, const ClassSpec& spec,
                                                std::optional<double> grid_step = std::nullopt);

struct NuEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
    double h = 0.0;
    bool within_class = false;  ///< mean <= h
};

/// Estimates E nu over `samples` paths drawn from per-index substreams of master_seed.
NuEstimate estimate_expected_nu(const std::function<RandomPertPath(std::uint64_t)>& factory,
                                std::uint64_t master_seed, long samples, double h, int workers = 1);

/// Perturbations induced by pump amplitude a(t) and phase phi(t):
///   xi = eta = a(t), zeta = -4 phi'(t) / eps, t = 2 tau / eps.
/// phi' by central difference (step 1e-6 max(1, |t|)) unless supplied.
DeterministicPert duffing_pert_map(std::function<double(double)> amplitude,
                                   std::function<double(double)> phase, double eps,
                                   std::function<double(double)> phase_derivative = {},
                                   ClassSpec spec = {0.0, 0.0, 1.0,
                                                     std::numeric_limits<double>::infinity()});

}  // namespace autores
