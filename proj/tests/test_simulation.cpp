#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "autores/errors.hpp"
#include "autores/lyapunov.hpp"
#include "autores/simulation.hpp"
#include "autores/transform.hpp"

using namespace autores;

namespace {

const ModelParams kBase{1.0, 0.5, 0.2};

PathFactory jump_factory(double lo, double hi) {
    return [lo, hi](std::uint64_t seed, double mu) {
        return sample_jump_train({10, Distribution::uniform(lo, hi), mu}, seed);
    };
}

}  // namespace

TEST_CASE("deviation norm") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 1);
    const auto p = eval_reference(ref, 100.0);
    CHECK(deviation_norm(p, 100.0, ref) == 0.0);
    CHECK(deviation_norm({p.r + 1.0, p.psi}, 100.0, ref) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(deviation_norm({p.r + 1.0, p.psi}, 100.0, ref, DeviationWeight::lambda_tau) ==
          doctest::Approx(0.1).epsilon(1e-12));
    const auto d = example1_drift(kBase, 0.1);
    const double n = deviation_norm({p.r - 0.1 * 100.0, d.phase_limit}, 100.0, ref);
    CHECK(n == doctest::Approx(1.0).epsilon(0.1));
    CHECK_THROWS_AS(deviation_norm(p, 0.0, ref), DomainError);
}

TEST_CASE("reference start stays close without perturbation") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    const auto t = integrate_until_escape(unperturbed_field(kBase), eval_reference(ref, 10.0), 10.0, 1e3, 0.1, ref,
                                          IntegratorConfig{});
    CHECK(t.status == TrajectoryStatus::completed);
    CHECK_FALSE(t.escape_time.has_value());
    CHECK(t.times.back() == 1e3);
    CHECK(t.max_norm < 0.1);

    const auto inf = integrate_until_escape(unperturbed_field(kBase), {5.0, 0.0}, 10.0, 50.0,
                                            std::numeric_limits<double>::infinity(), ref, IntegratorConfig{});
    CHECK(inf.status == TrajectoryStatus::completed);
}

TEST_CASE("negative pumping escapes and the bracket is tight") {
    const ModelParams p{1.0, 0.5, -0.2};
    const auto ref = extend_coeffs(p, Branch::minus, 2);
    const auto x0 = from_transformed({1e-3, 0.0}, 100.0, ref);
    const auto t = integrate_until_escape(unperturbed_field(p), x0, 100.0, 1e3, 0.1, ref, IntegratorConfig{});
    REQUIRE(t.status == TrajectoryStatus::escaped);
    REQUIRE(t.escape_bracket.has_value());
    CHECK(*t.escape_time < 1e3);
    const auto [lo, hi] = *t.escape_bracket;
    CHECK(hi - lo <= 1e-6);
    CHECK(hi == *t.escape_time);
    CHECK(deviation_norm(t.states.back(), hi, ref) > 0.1);
}

TEST_CASE("negative amplitude is a validity violation") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 1);
    const auto t = integrate_until_escape(unperturbed_field(kBase), {-1.0, 0.0}, 10.0, 20.0, 1e9, ref,
                                          IntegratorConfig{});
    CHECK(t.status == TrajectoryStatus::validity_violation);
}

TEST_CASE("V decreases along stable runs and increases along unstable ones near the origin") {
    for (double f : {0.2, -0.2}) {
        CAPTURE(f);
        const ModelParams p{1.0, 0.5, f};
        const auto ref = extend_coeffs(p, Branch::minus, 2);
        std::vector<double> grid;
        for (int i = 0; i <= 200; ++i) grid.push_back(100.0 + i);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-11;
        cfg.abs_tol = 1e-13;
        const auto tr = integrate(transformed_field(ref), {1e-4, 0.0}, 100.0, 300.0, cfg, grid);
        int wrong = 0;
        // only inside the neighbourhood; unstable runs leave it and keep going
        for (std::size_t i = 1; i < tr.states.size() && TransformedState::from(tr.states[i]).rho() < 0.05; ++i) {
            const double a = lyapunov_V(TransformedState::from(tr.states[i - 1]), tr.times[i - 1], ref);
            const double b = lyapunov_V(TransformedState::from(tr.states[i]), tr.times[i], ref);
            if (f > 0 ? b > a : b < a) ++wrong;
        }
        CHECK(wrong == 0);
    }
}

TEST_CASE("Figure-2 initial points") {
    IntegratorConfig cfg;
    double rf = 0.0, pf = 0.0;
    // (1.59, 0.59) locks onto the sweep; (0.35, 3.09) stays small.
    CHECK(classify_capture(kBase, 1.59, 0.59, 100.0, {}, cfg, &rf, &pf) == BasinClass::captured);
    CHECK(rf / 100.0 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(classify_capture(kBase, 0.35, 3.09, 100.0, {}, cfg, &rf) == BasinClass::bounded);
    CHECK(rf < 1.0);
    CHECK(classify_capture(kBase, 0.0, 1.0, 100.0, {}, cfg, &rf) == BasinClass::bounded);
    CHECK(rf == 0.0);
}

TEST_CASE("basin scan ordering and worker independence") {
    BasinGrid g;
    g.r_count = 4;
    g.psi_count = 3;
    g.r_hi = 1.5;
    g.extra_points = {{0.35, 3.09}, {1.59, 0.59}};
    const auto pts = g.points();
    REQUIRE(pts.size() == 14);
    CHECK(pts[1].first == 0.0);
    CHECK(pts[3].first == 0.5);
    const auto a = basin_scan(kBase, g, 60.0, {}, {}, 1);
    const auto b = basin_scan(kBase, g, 60.0, {}, {}, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cls == b[i].cls);
        CHECK(a[i].r_final == b[i].r_final);
        CHECK(a[i].r0 == pts[i].first);
    }
    for (int j = 0; j < 3; ++j) CHECK(a[static_cast<std::size_t>(j)].cls == BasinClass::bounded);
}

TEST_CASE("decay fit") {
    std::vector<double> t, rho;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i);
        rho.push_back(std::exp(-0.05 * i));
    }
    const auto fit = decay_rate_fit(t, rho, {0.0, 100.0});
    CHECK(std::abs(fit.rate - 0.05) < 1e-6);
    CHECK(fit.samples == 101);
    CHECK_THROWS_AS(decay_rate_fit(t, rho, {0.0, 8.5}), FitError);
    rho[50] = 0.0;
    CHECK_THROWS_AS(decay_rate_fit(t, rho, {0.0, 100.0}), FitError);
}

TEST_CASE("stable runs decay at least at the predicted rate") {
    const auto ref = extend_coeffs(kBase, Branch::minus, 2);
    std::vector<double> grid;
    for (int i = 0; i <= 300; ++i) grid.push_back(100.0 + i);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-14;
    const auto tr = integrate(transformed_field(ref), {0.05, 0.0}, 100.0, 400.0, cfg, grid);
    TransformedTrajectory tt;
    tt.times = tr.times;
    for (const auto& s : tr.states) tt.states.push_back(TransformedState::from(s));
    CHECK(decay_rate_fit(tt, {100.0, 400.0}).rate >= 0.1 / 6.0);
}

TEST_CASE("Wilson interval") {
    const auto z = wilson_interval(0, 500);
    CHECK(z.first == 0.0);
    CHECK(z.second > 0.0);
    CHECK(wilson_interval(500, 500).second == 1.0);
    const auto m = wilson_interval(52, 500);
    CHECK(m.first < 0.104);
    CHECK(m.second > 0.104);
    CHECK(m.first == doctest::Approx(0.0802).epsilon(2e-3));
    CHECK(m.second == doctest::Approx(0.1341).epsilon(2e-3));
}

TEST_CASE("Monte Carlo escape") {
    MonteCarloConfig mc;
    mc.n_trials = 40;
    mc.mu = 0.01;
    mc.seed = 99;
    const auto zero = monte_carlo_escape(mc, [](std::uint64_t, double mu) { return RandomPertPath::zero(mu); }, 1.0);
    CHECK(zero.escape_prob == 0.0);
    CHECK(zero.n_failed == 0);
    CHECK(zero.horizon == doctest::Approx(55.0).epsilon(1e-12));

    const auto a = monte_carlo_escape(mc, jump_factory(-0.5, 0.5), 1.0, 1);
    const auto b = monte_carlo_escape(mc, jump_factory(-0.5, 0.5), 1.0, 6);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(a.trials[i].seed == b.trials[i].seed);
        CHECK(a.trials[i].max_deviation == b.trials[i].max_deviation);
    }
    CHECK(a.n_escaped == b.n_escaped);
    CHECK(a.wilson_ci_95.first <= a.escape_prob);
    CHECK(a.wilson_ci_95.second >= a.escape_prob);

    // a wider threshold never adds an escape on the same path
    MonteCarloConfig wide = mc;
    wide.epsilon = 0.2;
    const auto w = monte_carlo_escape(wide, jump_factory(-0.5, 0.5), 1.0, 4);
    for (std::size_t i = 0; i < a.trials.size(); ++i)
        if (w.trials[i].status == TrajectoryStatus::escaped) CHECK(a.trials[i].status == TrajectoryStatus::escaped);

    mc.kappa = 1.0;
    CHECK_THROWS_AS(monte_carlo_escape(mc, jump_factory(-0.5, 0.5), 1.0), ConfigError);
}

TEST_CASE("oscillator and averaged envelope agree at small amplitude") {
    DuffingParams dp;
    dp.alpha = dp.eps * dp.eps / 8.0;
    const auto cmp = duffing_compare(dp, 2000.0, IntegratorConfig{}, 1e-3, 0.0);
    CHECK(cmp.sup_rel_error <= 0.3);
    CHECK(cmp.averaged_params.lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cmp.initial_amplitude == doctest::Approx(1e-3).epsilon(1e-12));

    DuffingParams damped = dp;
    damped.beta = 0.006;
    CHECK_THROWS_AS(duffing_compare(damped, 2000.0, IntegratorConfig{}, 1e-3, 0.0), DomainError);
}
