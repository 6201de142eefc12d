#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "autores/errors.hpp"
#include "autores/lyapunov.hpp"
#include "autores/transform.hpp"

using namespace autores;

namespace {

const ModelParams kBase{1.0, 0.5, 0.2};

Vec2 rk4(const SeriesCoeffs& ref, Vec2 y, double t, double h) {
    auto f = [&](double tt, const Vec2& yy) { return rhs_transformed(TransformedState::from(yy), tt, ref); };
    const Vec2 k1 = f(t, y);
    const Vec2 k2 = f(t + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const Vec2 k3 = f(t + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
    const Vec2 k4 = f(t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    return {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

}  // namespace

TEST_CASE("V at the origin and the cross term") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 1);
    CHECK(lyapunov_V({0.0, 0.0}, 100.0, ref) == 0.0);
    CHECK(lyapunov_derivative({0.0, 0.0}, 100.0, ref) == 0.0);
    const double d = lyapunov_V({0.1, 0.1}, 100.0, ref) - hamiltonian({0.1, 0.1}, 100.0, ref);
    CHECK(d == doctest::Approx(5e-5).epsilon(1e-12));
    CHECK_THROWS_AS(lyapunov_V({0.1, 0.1}, 0.0, ref), DomainError);
}

TEST_CASE("analytic partials of V match central differences") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        const double rho = 0.3 * u(gen), th = 2.0 * std::numbers::pi * u(gen);
        const double R = rho * std::cos(th), P = rho * std::sin(th);
        const double tau = 10.0 * std::pow(1e4, u(gen));
        const auto t = lyapunov_terms(TransformFrame(ref, tau), R, P);
        auto V = [&](double a, double b, double c) { return lyapunov_V({a, b}, c, ref); };
        const double fR = (V(R + h, P, tau) - V(R - h, P, tau)) / (2 * h);
        const double fP = (V(R, P + h, tau) - V(R, P - h, tau)) / (2 * h);
        const double ht = h * tau;
        const double fT = (V(R, P, tau + ht) - V(R, P, tau - ht)) / (2 * ht);
        CHECK(std::abs(t.d_R - fR) <= 1e-6 * std::max(std::abs(t.d_R), 1e-3));
        CHECK(std::abs(t.d_Psi - fP) <= 1e-6 * std::max(std::abs(t.d_Psi), 1e-3));
        CHECK(std::abs(t.d_tau - fT) <= 1e-6 * std::max(std::abs(t.d_tau), 1e-3 / tau));
    }
}

TEST_CASE("dV/dtau matches the derivative of V along the flow") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    const double h = 1e-4;
    for (double tau : {50.0, 400.0}) {
        const Vec2 y{0.04, -0.03};
        const Vec2 yp = rk4(ref, y, tau, h);
        const Vec2 ym = rk4(ref, y, tau, -h);
        const double fd = (lyapunov_V(TransformedState::from(yp), tau + h, ref) -
                           lyapunov_V(TransformedState::from(ym), tau - h, ref)) / (2 * h);
        const double an = lyapunov_derivative(TransformedState::from(y), tau, ref);
        CHECK(an == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("perturbed dV/dtau adds the forcing terms") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    const TransformedState ts{0.03, 0.02};
    const double tau = 120.0;
    FlowPerturbation fp{{1.0, 1.0, tau}, 0.05};
    const TransformFrame fr(ref, tau);
    const auto v = lyapunov_terms(fr, ts.R, ts.Psi);
    const auto g = perturbation_forcing(fr, ts.R, ts.Psi, fp.values);
    const double extra = fr.s * fp.mu * (v.d_R * g.G + v.d_Psi * g.Q);
    CHECK(lyapunov_derivative(ts, tau, ref, fp) ==
          doctest::Approx(lyapunov_derivative(ts, tau, ref) + extra).epsilon(1e-12));
}

TEST_CASE("certification of the stable branch") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    const auto rep = certify_domain(ref, DomainBox{}, GridSpec{}, 4);
    REQUIRE(rep.certified);
    CHECK(rep.rho0 >= 0.05);
    CHECK(rep.tau0 <= 1e3);
    CHECK(rep.decay_margin > 0.0);
    CHECK(rep.sandwich_lower > 0.0);
    CHECK(rep.sandwich_upper > 0.0);
    CHECK(rep.ell > 0.0);
    CHECK_FALSE(rep.witness.has_value());

    // sandwich and decay at fresh random points inside the certified box
    const double sigma = kBase.sigma();
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double rho = rep.rho0 * (0.02 + 0.98 * u(gen)), th = 2.0 * std::numbers::pi * u(gen);
        const TransformedState ts{rho * std::cos(th), rho * std::sin(th)};
        const double tau = rep.tau0 * std::pow(rep.tau_max / rep.tau0, u(gen));
        const double q = ts.R * ts.R + sigma * ts.Psi * ts.Psi;
        const double V = lyapunov_V(ts, tau, ref);
        CHECK(V >= 0.25 * q);
        CHECK(V <= 0.75 * q);
        CHECK(lyapunov_derivative(ts, tau, ref) < 0.0);
    }
}

TEST_CASE("certification is independent of the worker count") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    const GridSpec g{16, 16, 8, 8};
    const auto a = certify_domain(ref, DomainBox{}, g, 1);
    const auto b = certify_domain(ref, DomainBox{}, g, 7);
    CHECK(a.certified == b.certified);
    CHECK(a.rho0 == b.rho0);
    CHECK(a.decay_margin == b.decay_margin);
    CHECK(a.sandwich_lower == b.sandwich_lower);
    CHECK(a.ell == b.ell);
    CHECK(a.samples == b.samples);
}

TEST_CASE("negative pumping yields a positive-derivative witness") {
    const auto ref = extend_coeffs(ModelParams{1.0, 0.5, -0.2}, Branch::minus, 2);
    const auto rep = certify_domain(ref, DomainBox{}, GridSpec{32, 32, 16, 8}, 2);
    CHECK_FALSE(rep.certified);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->value > 0.0);
    const double d = lyapunov_derivative({rep.witness->R, rep.witness->Psi}, rep.witness->tau, ref);
    CHECK(d == doctest::Approx(rep.witness->value).epsilon(1e-12));
}

TEST_CASE("zero dissipation cannot be certified") {
    const auto rep = certify_domain(ModelParams{1.0, 0.0, 0.2}, DomainBox{});
    CHECK_FALSE(rep.certified);
    CHECK(rep.decay_margin == 0.0);
    CHECK_FALSE(rep.diagnosis.empty());
    CHECK_THROWS_AS(certify_domain(ModelParams{1.0, 1.0, 0.2}, DomainBox{}), DomainError);
}

TEST_CASE("domain box validation") {
    CHECK_THROWS(DomainBox{-0.1, 10.0, 1e5}.validate());
    CHECK_THROWS(DomainBox{0.1, 10.0, 5.0}.validate());
}

TEST_CASE("branch classification") {
    CHECK(classify_branch(kBase, Branch::minus).stability == BranchStability::asymptotically_stable);
    const auto plus = classify_branch(kBase, Branch::plus);
    CHECK(plus.stability == BranchStability::unstable);
    CHECK(std::max(plus.eigen_a.real(), plus.eigen_b.real()) > 0.0);
    CHECK(plus.tau_probe == 1e3);
    CHECK(classify_branch(ModelParams{1.0, 0.5, -0.2}, Branch::minus).stability == BranchStability::unstable);
    CHECK(classify_branch(ModelParams{1.0, 0.0, 0.2}, Branch::minus).stability == BranchStability::inconclusive);
    CHECK_THROWS_AS(classify_branch(ModelParams{1.0, 1.0, 0.2}, Branch::minus), DomainError);
}
