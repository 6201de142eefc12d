#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "autores/errors.hpp"
#include "autores/integrator.hpp"

using namespace autores;

namespace {

double decay_endpoint(double rel_tol, double abs_tol = 1e-14) {
    IntegratorConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    double y_end = 0.0;
    integrate_steps<1>([](double, const StateN<1>& y) { return StateN<1>{-y[0]}; }, {1.0}, 0.0, 1.0, cfg,
                       [&](const StepView<1>& v) {
                           y_end = v.y1[0];
                           return true;
                       });
    return y_end;
}

}  // namespace

TEST_CASE("linear decay reaches exp(-1)") {
    CHECK(std::abs(decay_endpoint(1e-9, 1e-10) - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("tighter tolerance reduces the error") {
    const double e1 = std::abs(decay_endpoint(1e-7) - std::exp(-1.0));
    const double e2 = std::abs(decay_endpoint(0.5e-7) - std::exp(-1.0));
    CHECK(e1 / e2 >= 1.5);
}

TEST_CASE("harmonic oscillator conserves energy") {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-12;
    double worst = 0.0;
    integrate_steps<2>([](double, const StateN<2>& y) { return StateN<2>{y[1], -y[0]}; }, {1.0, 0.0}, 0.0, 100.0,
                       cfg, [&](const StepView<2>& v) {
                           worst = std::max(worst, std::abs(v.y1[0] * v.y1[0] + v.y1[1] * v.y1[1] - 1.0));
                           return true;
                       });
    CHECK(worst < 1e-7);
}

TEST_CASE("fixed-step RK4 is fourth order") {
    auto err = [](double h) {
        IntegratorConfig cfg;
        cfg.method = IntegratorMethod::fixed_rk4;
        cfg.h_init = h;
        double y = 0.0;
        integrate_steps<1>([](double, const StateN<1>& s) { return StateN<1>{-s[0]}; }, {1.0}, 0.0, 1.0, cfg,
                           [&](const StepView<1>& v) {
                               y = v.y1[0];
                               return true;
                           });
        return std::abs(y - std::exp(-1.0));
    };
    const double ratio = err(0.1) / err(0.05);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("steps land exactly on stop times") {
    IntegratorConfig cfg;
    std::vector<double> ends;
    const double stops[] = {0.3, 0.7};
    integrate_steps<1>([](double, const StateN<1>& y) { return StateN<1>{y[0]}; }, {1.0}, 0.0, 1.0, cfg,
                       [&](const StepView<1>& v) {
                           ends.push_back(v.t1);
                           return true;
                       },
                       stops);
    CHECK(std::find(ends.begin(), ends.end(), 0.3) != ends.end());
    CHECK(std::find(ends.begin(), ends.end(), 0.7) != ends.end());
    CHECK(ends.back() == 1.0);
}

TEST_CASE("Hermite interpolant is exact for cubics") {
    const StateN<1> y0{0.0}, y1{1.0}, f0{0.0}, f1{3.0};
    const StepView<1> v{0.0, 1.0, y0, y1, f0, f1};
    CHECK(v.at(0.5)[0] == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("finite-time blow-up is reported as stiffness") {
    IntegratorConfig cfg;
    CHECK_THROWS_AS(integrate_steps<1>([](double, const StateN<1>& y) { return StateN<1>{y[0] * y[0]}; }, {1.0},
                                       0.0, 2.0, cfg, {}),
                    StiffnessError);
}

TEST_CASE("step budget") {
    IntegratorConfig cfg;
    cfg.max_steps = 5;
    cfg.h_max = 0.01;
    long steps = 0;
    const auto out = integrate_steps<1>([](double, const StateN<1>& y) { return StateN<1>{-y[0]}; }, {1.0}, 0.0,
                                        10.0, cfg, {}, {}, &steps);
    CHECK(out == IntegrationOutcome::step_limit);
    CHECK(steps == 5);
}

TEST_CASE("observer can stop integration") {
    IntegratorConfig cfg;
    int n = 0;
    const auto out = integrate_steps<1>([](double, const StateN<1>& y) { return StateN<1>{-y[0]}; }, {1.0}, 0.0,
                                        10.0, cfg, [&](const StepView<1>&) { return ++n < 3; });
    CHECK(out == IntegrationOutcome::stopped);
    CHECK(n == 3);
}

TEST_CASE("configuration and argument checks") {
    IntegratorConfig bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS(bad.validate());
    CHECK_THROWS_AS(integrate_steps<1>([](double, const StateN<1>& y) { return y; }, {1.0}, 1.0, 0.0,
                                       IntegratorConfig{}, {}),
                    DomainError);
    CHECK_THROWS_AS(integrate_steps<1>([](double, const StateN<1>& y) { return y; }, {std::nan("")}, 0.0, 1.0,
                                       IntegratorConfig{}, {}),
                    InvalidInput);
    CHECK(integrator_method_from_string("embedded_rk45") == IntegratorMethod::embedded_rk45);
    CHECK_THROWS(integrator_method_from_string("euler"));
}
