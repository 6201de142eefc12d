#include "autores/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "autores/errors.hpp"

namespace autores {

std::string_view to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

Branch branch_from_string(std::string_view s) {
    if (s == "plus") return Branch::plus;
    if (s == "minus") return Branch::minus;
    throw InvalidInput("unknown branch '" + std::string(s) + "' (expected plus or minus)");
}

namespace {

void check_delta(const ModelParams& params) {
    params.validate();
    if (params.delta == 1.0)
        throw DegenerateParameters("delta = 1: cos(psi_0) = 0 and the order-matching system is singular");
    if (!(params.delta > 0.0 && params.delta < 1.0))
        throw DomainError("delta must lie in (0, 1) for two distinct autoresonant branches");
}

double cos_psi0_of(const ModelParams& params, Branch branch) {
    return branch == Branch::minus ? -params.sigma() : params.sigma();
}

double psi0_of(const ModelParams& params, Branch branch) {
    const double a = std::asin(params.delta);
    return branch == Branch::minus ? std::numbers::pi - a : a;
}

// Coefficients of sin(u) and cos(u) for a power series u with u[0] = 0,
// through the length of u, via s' = c u', c' = -s u'.
void sin_cos_series(const std::vector<double>& u, std::vector<double>& s, std::vector<double>& c) {
    const std::size_t n = u.size();
    s.assign(n, 0.0);
    c.assign(n, 0.0);
    c[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double sk = 0.0;
        double ck = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double ju = static_cast<double>(j) * u[j];
            sk += ju * c[k - j];
            ck -= ju * s[k - j];
        }
        s[k] = sk / static_cast<double>(k);
        c[k] = ck / static_cast<double>(k);
    }
}

}  // namespace

LeadingCoeffs leading_coeffs(const ModelParams& params, Branch branch) {
    check_delta(params);
    const double c0 = cos_psi0_of(params, branch);
    return {psi0_of(params, branch), -params.f * c0, 1.0 / c0, params.f * params.delta / c0};
}

SeriesCoeffs::SeriesCoeffs(Branch branch, ModelParams params, std::vector<double> r_coeffs,
                           std::vector<double> psi_coeffs)
    : branch_(branch), params_(params), r_(std::move(r_coeffs)), psi_(std::move(psi_coeffs)) {
    if (r_.empty() || r_.size() != psi_.size())
        throw InvalidInput("SeriesCoeffs: coefficient arrays must be nonempty and of equal length");
    if (static_cast<int>(r_.size()) - 1 > kMaxSeriesOrder)
        throw DomainError("SeriesCoeffs: order exceeds the supported maximum");
}

double SeriesCoeffs::cos_psi0() const { return cos_psi0_of(params_, branch_); }

bool SeriesCoeffs::conditioning_warning() const {
    auto big = [](double v) { return std::abs(v) > kConditioningLimit; };
    return std::any_of(r_.begin(), r_.end(), big) || std::any_of(psi_.begin(), psi_.end(), big);
}

SeriesCoeffs SeriesCoeffs::truncated(int j) const {
    if (j < 0 || j > order()) throw DomainError("truncated: order out of range");
    return SeriesCoeffs(branch_, params_, std::vector<double>(r_.begin(), r_.begin() + j + 1),
                        std::vector<double>(psi_.begin(), psi_.begin() + j + 1));
}

SeriesCoeffs extend_coeffs(const ModelParams& params, Branch branch, int order) {
    check_delta(params);
    if (order < 0 || order > kMaxSeriesOrder)
        throw DomainError("extend_coeffs: order must be in [0, " + std::to_string(kMaxSeriesOrder) + "]");

    const double lam = params.lambda;
    const double delta = params.delta;
    const double f = params.f;
    const double c0 = cos_psi0_of(params, branch);
    const auto n = static_cast<std::size_t>(order) + 1;

    // u holds the phase correction psi_1 e + psi_2 e^2 + ... (e = 1/tau).
    std::vector<double> r(n, 0.0);
    std::vector<double> u(n, 0.0);
    std::vector<double> sn;
    std::vector<double> cs;

    // With S = sin(psi) - delta = delta (cos u - 1) + c0 sin u and C = cos(psi) = c0 cos u - delta sin u,
    // the r-equation at order e^(k-1) fixes psi_k and the psi-equation at order e^k fixes r_k.
    r[0] = -f * c0;
    for (std::size_t k = 1; k < n; ++k) {
        u[k] = 0.0;
        sin_cos_series(u, sn, cs);
        auto S = [&](std::size_t i) { return delta * (i == 0 ? 0.0 : cs[i]) + c0 * sn[i]; };

        double rhs = (k == 1) ? lam : 0.0;
        if (k >= 2) rhs -= static_cast<double>(k - 2) * r[k - 2];
        for (std::size_t j = 0; j + 2 <= k; ++j) rhs -= r[j] * S(k - 1 - j);
        rhs -= lam * S(k);
        u[k] = rhs / (lam * c0);

        // The psi_k contribution to C_k is -delta psi_k (the cos u coefficient has no linear part).
        sin_cos_series(u, sn, cs);
        const double ck = c0 * cs[k] - delta * sn[k];
        r[k] = -static_cast<double>(k - 1) * u[k - 1] - f * ck;
    }

    std::vector<double> psi(u);
    psi[0] = psi0_of(params, branch);
    return SeriesCoeffs(branch, params, std::move(r), std::move(psi));
}

ReferencePoint eval_reference_full(const SeriesCoeffs& series, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("reference evaluation requires tau > 0");
    const auto& rc = series.r_coeffs();
    const auto& pc = series.psi_coeffs();
    const double e = 1.0 / tau;
    const int J = series.order();

    // Horner in e for the tails sum_{j>=1} c_j e^j and their derivatives -sum j c_j e^(j+1).
    double r_tail = 0.0;
    double p_tail = 0.0;
    double dr_tail = 0.0;
    double dp_tail = 0.0;
    for (int j = J; j >= 1; --j) {
        r_tail = (r_tail + rc[j]) * e;
        p_tail = (p_tail + pc[j]) * e;
        dr_tail = (dr_tail + j * rc[j]) * e;
        dp_tail = (dp_tail + j * pc[j]) * e;
    }
    ReferencePoint p;
    p.r_offset = rc[0] + r_tail;
    p.psi_shift = p_tail;
    p.r = series.params().lambda * tau + p.r_offset;
    p.psi = pc[0] + p_tail;
    p.dr = series.params().lambda - dr_tail * e;
    p.dpsi = -dp_tail * e;
    return p;
}

PhaseState eval_reference(const SeriesCoeffs& series, double tau) {
    const ReferencePoint p = eval_reference_full(series, tau);
    return {p.r, p.psi};
}

Vec2 residual(const SeriesCoeffs& series, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("residual requires tau > 0");
    // Extended precision: the psi-equation residual is O(tau^-(J+1)) while its
    // individual terms are O(1/tau), so double rounding would swamp it at large tau.
    using ld = long double;
    const ModelParams& prm = series.params();
    const auto& rc = series.r_coeffs();
    const auto& pc = series.psi_coeffs();
    const ld e = 1.0L / static_cast<ld>(tau);
    const ld lam = prm.lambda;
    const ld delta = prm.delta;
    const ld f = prm.f;
    const ld c0 = series.cos_psi0();
    // Zero for generated coefficients (r_0 is stored as -f cos(psi_0)); kept for hand-built series.
    const double k0 = rc[0] + prm.f * series.cos_psi0();

    ld r_tail = 0.0L, p_tail = 0.0L, dr_tail = 0.0L, dp_tail = 0.0L;
    for (int j = series.order(); j >= 1; --j) {
        r_tail = (r_tail + rc[j]) * e;
        p_tail = (p_tail + pc[j]) * e;
        dr_tail = (dr_tail + static_cast<ld>(j) * rc[j]) * e;
        dp_tail = (dp_tail + static_cast<ld>(j) * pc[j]) * e;
    }
    const ld h = std::sin(0.5L * p_tail);
    const ld cos_m1 = -2.0L * h * h;  // cos(d) - 1 without cancellation
    const ld sin_d = std::sin(p_tail);
    // sin(psi) - delta and cos(psi) - cos(psi_0), expanded about psi_0.
    const ld S = delta * cos_m1 + c0 * sin_d;
    const ld C_m = c0 * cos_m1 - delta * sin_d;

    const ld r = lam / e + (static_cast<ld>(rc[0]) + r_tail);
    const ld res_r = (lam - r * S) - dr_tail * e;
    const ld res_psi = -dp_tail * e - (static_cast<ld>(k0) + r_tail + f * C_m);
    return {static_cast<double>(res_r), static_cast<double>(res_psi)};
}

}  // namespace autores
