#include "autores/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "autores/errors.hpp"
#include "autores/transform.hpp"

namespace autores {

double lyapunov_V(const TransformedState& ts, double tau, const SeriesCoeffs& ref) {
    return lyapunov_terms(TransformFrame(ref, tau), ts.R, ts.Psi).value;
}

namespace {

double derivative_in_frame(const TransformFrame& fr, double R, double Psi,
                           const std::optional<FlowPerturbation>& pert) {
    const HamiltonianTerms h = hamiltonian_terms(fr, R, Psi);
    const HamiltonianTerms v = lyapunov_terms(fr, R, Psi);
    double dR = -h.d_Psi + non_hamiltonian_part(fr, R, Psi);
    double dPsi = h.d_R;
    if (pert) {
        const PerturbationForcing g = perturbation_forcing(fr, R, Psi, pert->values);
        dR += pert->mu * g.G;
        dPsi += pert->mu * g.Q;
    }
    return v.d_tau + fr.s * (v.d_R * dR + v.d_Psi * dPsi);
}

}  // namespace

double lyapunov_derivative(const TransformedState& ts, double tau, const SeriesCoeffs& ref,
                           const std::optional<FlowPerturbation>& pert) {
    return derivative_in_frame(TransformFrame(ref, tau), ts.R, ts.Psi, pert);
}

void DomainBox::validate() const {
    if (!(rho_max > 0.0) || !std::isfinite(rho_max)) throw InvalidInput("DomainBox: rho_max must be positive");
    if (!(tau_min > 0.0) || !(tau_min < tau_max) || !std::isfinite(tau_max))
        throw InvalidInput("DomainBox: need 0 < tau_min < tau_max");
}

namespace {

struct SweepResult {
    double decay = std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double ell = 0.0;
    long samples = 0;
    SamplePoint worst_derivative{0.0, 0.0, 0.0, -std::numeric_limits<double>::infinity()};

    void merge(const SweepResult& o) {
        decay = std::min(decay, o.decay);
        lower = std::min(lower, o.lower);
        upper = std::min(upper, o.upper);
        ell = std::max(ell, o.ell);
        samples += o.samples;
        if (o.worst_derivative.value > worst_derivative.value) worst_derivative = o.worst_derivative;
    }
};

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    out.back() = hi;
    return out;
}

SweepResult sweep_taus(const SeriesCoeffs& ref, const std::vector<double>& taus, std::size_t begin,
                       std::size_t end, double rho_max, const GridSpec& grid) {
    const ModelParams& p = ref.params();
    const double sigma = p.sigma();
    const double target = p.m() * std::sqrt(p.lambda) / 4.0;
    SweepResult out;
    for (std::size_t k = begin; k < end; ++k) {
        const TransformFrame fr(ref, taus[k]);
        for (int j = 1; j <= grid.radii; ++j) {
            const double rho = rho_max * j / grid.radii;
            for (int i = 0; i < grid.angles; ++i) {
                const double th = 2.0 * std::numbers::pi * i / grid.angles;
                const double R = rho * std::cos(th);
                const double Psi = rho * std::sin(th);
                const double q = R * R + sigma * Psi * Psi;
                const HamiltonianTerms v = lyapunov_terms(fr, R, Psi);
                const double dv = derivative_in_frame(fr, R, Psi, std::nullopt);
                out.decay = std::min(out.decay, -dv / q - target);
                out.lower = std::min(out.lower, v.value / q - 0.25);
                out.upper = std::min(out.upper, 0.75 - v.value / q);
                out.ell = std::max(out.ell, std::abs(v.d_R) + std::abs(v.d_Psi));
                if (dv > out.worst_derivative.value) out.worst_derivative = {R, Psi, fr.tau, dv};
                ++out.samples;
            }
        }
    }
    return out;
}

SweepResult sweep_box(const SeriesCoeffs& ref, double rho_max, double tau_min, double tau_max,
                      const GridSpec& grid, int workers) {
    const std::vector<double> taus = log_spaced(tau_min, tau_max, grid.taus);
    const std::size_t n = taus.size();
    const std::size_t chunks = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    std::vector<SweepResult> parts(chunks);
    auto run = [&](std::size_t c) {
        parts[c] = sweep_taus(ref, taus, c * n / chunks, (c + 1) * n / chunks, rho_max, grid);
    };
    if (chunks <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(run, c);
        for (auto& t : pool) t.join();
    }
    SweepResult total;
    for (const auto& part : parts) total.merge(part);  // fixed chunk order
    return total;
}

}  // namespace

CertificateReport certify_domain(const SeriesCoeffs& ref, const DomainBox& box, const GridSpec& grid,
                                 int workers) {
    box.validate();
    if (grid.angles < 1 || grid.radii < 1 || grid.taus < 1 || grid.max_rounds < 1)
        throw InvalidInput("GridSpec: all counts must be positive");
    const ModelParams& p = ref.params();

    CertificateReport rep;
    rep.grid = grid;
    rep.tau_max = box.tau_max;
    double rho = box.rho_max;
    double tau_min = box.tau_min;
    SweepResult last;
    for (int round = 0; round < grid.max_rounds && tau_min < box.tau_max; ++round) {
        last = sweep_box(ref, rho, tau_min, box.tau_max, grid, workers);
        rep.rounds = round + 1;
        rep.samples += last.samples;
        rep.rho0 = rho;
        rep.tau0 = tau_min;
        rep.decay_margin = last.decay;
        rep.sandwich_lower = last.lower;
        rep.sandwich_upper = last.upper;
        rep.ell = 1.1 * last.ell;
        if (last.worst_derivative.value > 0.0) rep.witness = last.worst_derivative;
        else rep.witness.reset();
        if (p.m() > 0.0 && last.decay > 0.0 && last.lower > 0.0 && last.upper > 0.0) {
            rep.certified = true;
            break;
        }
        rho *= 0.5;
        tau_min *= 2.0;
    }

    std::ostringstream d;
    if (rep.certified) {
        d << "certified on B(" << rep.rho0 << ", " << rep.tau0 << ") sampled up to tau = " << rep.tau_max;
    } else {
        d << "no certified box within " << rep.rounds << " rounds";
        if (!(p.m() > 0.0)) d << "; m = delta f / sqrt(lambda) <= 0, so no decay is possible";
        if (rep.witness) d << "; dV/dtau > 0 observed";
    }
    rep.diagnosis = d.str();
    return rep;
}

CertificateReport certify_domain(const ModelParams& params, const DomainBox& box, const GridSpec& grid,
                                 int workers, int reference_order) {
    params.validate();
    box.validate();
    if (!(params.delta >= 0.0 && params.delta < 1.0))
        throw DomainError("certify_domain: delta must lie in [0, 1)");
    if (params.delta == 0.0) {
        CertificateReport rep;
        rep.grid = grid;
        rep.rho0 = box.rho_max;
        rep.tau0 = box.tau_min;
        rep.tau_max = box.tau_max;
        rep.decay_margin = 0.0;
        rep.diagnosis = "delta = 0 gives m = 0: the decay inequality has zero margin";
        return rep;
    }
    return certify_domain(extend_coeffs(params, Branch::minus, reference_order), box, grid, workers);
}

std::string_view to_string(BranchStability s) {
    switch (s) {
        case BranchStability::asymptotically_stable: return "asymptotically_stable";
        case BranchStability::unstable: return "unstable";
        case BranchStability::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

BranchClassification classify_branch(const ModelParams& params, Branch branch, double tau_probe) {
    params.validate();
    if (!(params.delta >= 0.0 && params.delta < 1.0))
        throw DomainError("classify_branch: delta must lie in [0, 1)");
    if (!(tau_probe > 0.0)) throw DomainError("classify_branch: tau_probe must be positive");

    // Linearization of the averaged system about (lambda tau + r_0, psi_0), frozen at tau_probe:
    //   [[sin psi_0 - delta, r cos psi_0], [1, -f sin psi_0]] = [[0, b], [1, -f delta]].
    const double c0 = branch == Branch::minus ? -params.sigma() : params.sigma();
    const double r = params.lambda * tau_probe - params.f * c0;
    const double b = r * c0;
    const double tr = -params.f * params.delta;
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr + 4.0 * b, 0.0));

    BranchClassification out;
    out.tau_probe = tau_probe;
    out.eigen_a = 0.5 * (tr + disc);
    out.eigen_b = 0.5 * (tr - disc);
    const double max_re = std::max(out.eigen_a.real(), out.eigen_b.real());
    if (branch == Branch::plus) {
        out.stability = max_re > 0.0 ? BranchStability::unstable : BranchStability::inconclusive;
    } else if (params.delta == 0.0) {
        out.stability = BranchStability::inconclusive;
    } else {
        out.stability = params.f > 0.0 ? BranchStability::asymptotically_stable : BranchStability::unstable;
    }
    return out;
}

}  // namespace autores
