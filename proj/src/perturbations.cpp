#include "autores/perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "autores/errors.hpp"

namespace autores {

double ClassSpec::theta() const { return std::max({a + 0.5, b, c}); }

double ClassSpec::kappa0() const {
    const double t = theta();
    return t > 0.0 ? 1.0 / t : std::numeric_limits<double>::infinity();
}

double ClassSpec::weighted_sup_term(const PerturbationValues& pv, double tau) const {
    return std::abs(pv.xi) * std::pow(tau, -a) + std::abs(pv.eta) * std::pow(tau, -b) +
           std::abs(pv.zeta) * std::pow(tau, -c);
}

DeterministicPert make_example1() {
    DeterministicPert p;
    p.eval = [](double, double, double tau) { return PerturbationValues{1.0, 1.0, tau}; };
    p.spec = {0.0, 0.0, 1.0, 3.0, ClassSpec::Kind::deterministic};
    p.name = "example1";
    return p;
}

double Example1Drift::weighted_deviation(double tau) const { return mu * std::sqrt(tau); }

Example1Drift example1_drift(const ModelParams& params, double mu) {
    params.validate();
    if (!(mu >= 0.0 && mu < params.lambda)) throw DomainError("example1_drift: need 0 <= mu < lambda");
    return {params.lambda - mu, std::numbers::pi - std::asin(params.delta / (1.0 + mu)), mu};
}

// ---------------------------------------------------------------------------

RandomPertPath::RandomPertPath(std::vector<Pulse> pulses, std::array<int, 3> tau_powers, ClassSpec spec,
                               double mu, double nu, std::uint64_t seed)
    : pulses_(std::move(pulses)), powers_(tau_powers), spec_(spec), mu_(mu), nu_(nu), seed_(seed) {
    for (const Pulse& p : pulses_)
        if (!std::isfinite(p.start) || !std::isfinite(p.end) || !std::isfinite(p.amplitude) || p.end < p.start)
            throw InvalidInput("RandomPertPath: malformed pulse");
    if (!(mu_ > 0.0)) throw InvalidInput("RandomPertPath: mu must be positive");
    if (!(nu_ >= 0.0)) throw InvalidInput("RandomPertPath: nu must be nonnegative");
    std::stable_sort(pulses_.begin(), pulses_.end(),
                     [](const Pulse& x, const Pulse& y) { return x.start < y.start; });
}

RandomPertPath RandomPertPath::zero(double mu) {
    return RandomPertPath({}, {0, 0, 0}, {0.0, 0.0, 0.0, 0.0, ClassSpec::Kind::random}, mu, 0.0, 0);
}

double RandomPertPath::amplitude(double tau) const {
    double j = 0.0;
    for (const Pulse& p : pulses_)
        if (p.start <= tau && tau <= p.end) j += p.amplitude;
    return j;
}

PerturbationValues RandomPertPath::values_with(double tau, double tau_active) const {
    const double j = amplitude(tau_active);
    if (j == 0.0) return {};
    auto term = [&](int k) { return j * std::pow(tau, powers_[static_cast<std::size_t>(k)]); };
    return {term(0), term(1), term(2)};
}

PerturbationValues RandomPertPath::values(double tau) const { return values_with(tau, tau); }

double RandomPertPath::envelope(double tau) const { return 3.0 * std::abs(amplitude(tau)); }

double RandomPertPath::moving_average(double tau) const {
    // |J| is piecewise constant between pulse endpoints; integrate it exactly.
    const double hi = tau + 1.0;
    std::vector<double> cuts{tau};
    for (double b : breakpoints())
        if (b > tau && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double w = cuts[i + 1] - cuts[i];
        if (w > 0.0) total += w * envelope(0.5 * (cuts[i] + cuts[i + 1]));
    }
    return total;
}

std::vector<double> RandomPertPath::breakpoints() const {
    std::vector<double> b;
    b.reserve(2 * pulses_.size());
    for (const Pulse& p : pulses_) {
        b.push_back(p.start);
        b.push_back(p.end);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

void JumpTrainSpec::validate() const {
    if (N < 1) throw ConfigError("jump train: N must be at least 1");
    if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("jump train: mu must lie in (0, 1] so pulses do not overlap");
    jump.validate();
}

RandomPertPath sample_jump_train(const JumpTrainSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    std::vector<double> j(static_cast<std::size_t>(spec.N) + 1, 0.0);
    for (int n = 0; n < spec.N; ++n) j[static_cast<std::size_t>(n)] = spec.jump.sample(rng);

    std::vector<Pulse> pulses;
    double pair_max = 0.0;
    for (int n = 0; n < spec.N; ++n) {
        const auto k = static_cast<std::size_t>(n);
        pulses.push_back({n + 1.0, n + 1.0 + spec.mu, j[k]});
        pair_max = std::max(pair_max, std::abs(j[k]) + std::abs(j[k + 1]));
    }
    // h: E nu <= 3 E sum_n (|j_n| + |j_{n+1}|) <= 6 N E|j|.
    const ClassSpec cls{0.0, 0.0, 1.0, 6.0 * spec.N * spec.jump.mean_abs(), ClassSpec::Kind::random};
    return RandomPertPath(std::move(pulses), {0, 0, 1}, cls, spec.mu, 3.0 * pair_max, seed);
}

RandomPertPath sample_single_jump(const Distribution& omega, const Distribution& jump, double mu,
                                  std::uint64_t seed) {
    omega.validate();
    jump.validate();
    if (!(omega.support_min() > 0.0)) throw ConfigError("single jump: omega must have positive support");
    if (!(mu > 0.0)) throw ConfigError("single jump: mu must be positive");
    Rng rng(seed);
    const double w = omega.sample(rng);
    const double j = jump.sample(rng);
    const ClassSpec cls{0.0, 1.0, 1.0, 3.0 * jump.mean_abs(), ClassSpec::Kind::random};
    return RandomPertPath({{w, w + mu, j}}, {0, 1, 1}, cls, mu, 3.0 * std::abs(j), seed);
}

// ---------------------------------------------------------------------------

SamplePlan SamplePlan::defaults(const ModelParams& params, double tau_max) {
    if (!(tau_max > 1e-2)) throw InvalidInput("SamplePlan: tau_max must exceed 1e-2");
    SamplePlan p;
    p.r_max = 10.0 * params.lambda * tau_max;
    p.tau_max = tau_max;
    return p;
}

std::string SamplePlan::describe() const {
    std::ostringstream s;
    s << "r in [-" << r_max << ", " << r_max << "] x" << r_samples << ", psi in [" << psi_lo << ", " << psi_hi
      << "] x" << psi_samples << ", tau log-grid [" << tau_min << ", " << tau_max << "] x" << tau_samples;
    return s.str();
}

MembershipReport verify_deterministic_membership(const DeterministicPert& pert, const ClassSpec& spec,
                                                 const SamplePlan& plan) {
    if (plan.r_samples < 1 || plan.psi_samples < 1 || plan.tau_samples < 2 || !(plan.tau_min > 0.0) ||
        !(plan.tau_max > plan.tau_min))
        throw InvalidInput("SamplePlan: malformed sampling plan");
    auto lin = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };

    std::vector<double> per_tau(static_cast<std::size_t>(plan.tau_samples), 0.0);
    const double la = std::log(plan.tau_min);
    const double lb = std::log(plan.tau_max);
    for (int k = 0; k < plan.tau_samples; ++k) {
        const double tau = std::exp(la + (lb - la) * k / (plan.tau_samples - 1));
        double sup = 0.0;
        for (int i = 0; i < plan.r_samples; ++i) {
            const double r = lin(-plan.r_max, plan.r_max, plan.r_samples, i);
            for (int j = 0; j < plan.psi_samples; ++j) {
                const double psi = lin(plan.psi_lo, plan.psi_hi, plan.psi_samples, j);
                sup = std::max(sup, spec.weighted_sup_term(pert(r, psi, tau), tau));
            }
        }
        per_tau[static_cast<std::size_t>(k)] = sup;
    }

    MembershipReport rep;
    rep.h = spec.h;
    rep.plan = plan.describe();
    rep.sup = *std::max_element(per_tau.begin(), per_tau.end());
    rep.passed = rep.sup <= spec.h * (1.0 + 1e-12);
    const std::size_t half = per_tau.size() / 2;
    const double lower = *std::max_element(per_tau.begin(), per_tau.begin() + static_cast<long>(half));
    rep.unbounded_trend = per_tau.back() > 1.01 * lower && per_tau.back() >= rep.sup;
    return rep;
}

RandomMembershipReport verify_random_membership(const RandomPertPath& path, const ClassSpec& spec,
                                                std::optional<double> grid_step) {
    RandomMembershipReport rep;
    rep.envelope_ok = true;
    rep.moving_average_ok = true;
    const std::vector<double> bps = path.breakpoints();
    if (bps.empty()) return rep;

    const double step = grid_step.value_or(path.mu() / 10.0);
    if (!(step > 0.0)) throw InvalidInput("verify_random_membership: grid step must be positive");
    const double bound = path.mu() * path.nu();
    const double lo = std::max(step, bps.front() - 1.0 - step);
    const double hi = bps.back() + step;

    std::vector<double> grid;
    for (long i = 0;; ++i) {
        const double t = lo + static_cast<double>(i) * step;
        if (t > hi) break;
        grid.push_back(t);
    }
    // Pulse endpoints and the window starts that end on them are the extremal points.
    for (double b : bps) {
        grid.push_back(b);
        if (b - 1.0 > 0.0) grid.push_back(b - 1.0);
    }

    for (double t : grid) {
        ++rep.grid_points;
        const double expr = spec.weighted_sup_term(path.values(t), t);
        const double env = path.envelope(t);
        rep.max_envelope_excess = std::max(rep.max_envelope_excess, expr - env);
        if (expr > env * (1.0 + 1e-12) + 1e-300) rep.envelope_ok = false;

        const double m = path.moving_average(t);
        if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, m / bound);
        if (m > bound * (1.0 + 1e-12)) rep.moving_average_ok = false;
    }
    return rep;
}

NuEstimate estimate_expected_nu(const std::function<RandomPertPath(std::uint64_t)>& factory,
                                std::uint64_t master_seed, long samples, double h, int workers) {
    if (samples < 2) throw InvalidInput("estimate_expected_nu: need at least two samples");
    std::vector<double> nu(static_cast<std::size_t>(samples));
    const long chunks = std::min<long>(samples, std::max(1, workers));
    auto run = [&](long c) {
        for (long i = c * samples / chunks; i < (c + 1) * samples / chunks; ++i)
            nu[static_cast<std::size_t>(i)] = factory(substream_seed(master_seed, static_cast<std::uint64_t>(i))).nu();
    };
    if (chunks == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (long c = 0; c < chunks; ++c) pool.emplace_back(run, c);
        for (auto& t : pool) t.join();
    }
    double sum = 0.0;
    for (double v : nu) sum += v;
    const double mean = sum / static_cast<double>(samples);
    double ss = 0.0;
    for (double v : nu) ss += (v - mean) * (v - mean);
    NuEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
    est.samples = samples;
    est.h = h;
    est.within_class = mean <= h;
    return est;
}

DeterministicPert duffing_pert_map(std::function<double(double)> amplitude, std::function<double(double)> phase,
                                   double eps, std::function<double(double)> phase_derivative, ClassSpec spec) {
    if (!(eps > 0.0)) throw InvalidInput("duffing_pert_map: eps must be positive");
    std::function<double(double)> dphi = std::move(phase_derivative);
    if (!dphi && phase) {
        dphi = [phase](double t) {
            const double h = 1e-6 * std::max(1.0, std::abs(t));
            return (phase(t + h) - phase(t - h)) / (2.0 * h);
        };
    }
    DeterministicPert p;
    p.eval = [amplitude, dphi, eps](double, double, double tau) {
        const double t = 2.0 * tau / eps;
        const double a = amplitude ? amplitude(t) : 0.0;
        const double z = dphi ? -4.0 * dphi(t) / eps : 0.0;
        return PerturbationValues{a, a, z};
    };
    p.spec = spec;
    p.name = "duffing";
    return p;
}

}  // namespace autores
