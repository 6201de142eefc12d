#pragma once

// Explicit Runge-Kutta integration: Dormand-Prince 5(4) with proportional
// step control, or classical fixed-step RK4. Accepted steps are reported to
// an observer together with endpoint derivatives, so callers can build
// cubic Hermite dense output and event detection on top.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "autores/errors.hpp"

namespace autores {

enum class IntegratorMethod { fixed_rk4, embedded_rk45 };

std::string_view to_string(IntegratorMethod m);
IntegratorMethod integrator_method_from_string(std::string_view s);

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::embedded_rk45;
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double h_init = 1e-3;   ///< first trial step (fixed step for RK4)
    double h_max = 0.5;
    long max_steps = 5'000'000;

    void validate() const;
};

inline constexpr double kStepUnderflow = 1e-12;

enum class IntegrationOutcome { completed, stopped, step_limit };

template <std::size_t N>
using StateN = std::array<double, N>;

template <std::size_t N>
using VectorField = std::function<StateN<N>(double, const StateN<N>&)>;

/// One accepted step [t0, t1].
template <std::size_t N>
struct StepView {
    double t0;
    double t1;
    const StateN<N>& y0;
    const StateN<N>& y1;
    const StateN<N>& f0;
    const StateN<N>& f1;

    /// Cubic Hermite interpolant at t in [t0, t1].
    [[nodiscard]] StateN<N> at(double t) const {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        StateN<N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        return out;
    }
};

/// Return false to stop integration after this step.
template <std::size_t N>
using StepObserver = std::function<bool(const StepView<N>&)>;

namespace detail {

template <std::size_t N>
StateN<N> axpy(const StateN<N>& y, double h, std::initializer_list<std::pair<double, const StateN<N>*>> terms) {
    StateN<N> out = y;
    for (const auto& [c, k] : terms)
        if (c != 0.0)
            for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    return out;
}

template <std::size_t N>
bool all_finite(const StateN<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t1 (t0 < t1). Steps never cross an entry
/// of `stops` (sorted); they land on it exactly. Throws StiffnessError when the
/// adaptive step falls below kStepUnderflow.
template <std::size_t N>
IntegrationOutcome integrate_steps(const VectorField<N>& f, StateN<N> y, double t0, double t1,
                                   const IntegratorConfig& cfg, const StepObserver<N>& observer,
                                   std::span<const double> stops = {}, long* steps_taken = nullptr) {
    if (!(t0 < t1)) throw DomainError("integrate: require t0 < t1");
    if (!detail::all_finite(y)) throw InvalidInput("integrate: non-finite initial state");

    double t = t0;
    StateN<N> fy = f(t, y);
    double h = std::min(cfg.h_init, cfg.h_max);
    long steps = 0;
    auto next_stop = std::upper_bound(stops.begin(), stops.end(), t0);

    auto target = [&]() {
        while (next_stop != stops.end() && *next_stop <= t) ++next_stop;
        return (next_stop != stops.end() && *next_stop < t1) ? *next_stop : t1;
    };

    while (t < t1) {
        if (steps >= cfg.max_steps) {
            if (steps_taken) *steps_taken = steps;
            return IntegrationOutcome::step_limit;
        }
        const double limit = target();
        double step = std::min(h, limit - t);
        bool lands = (t + step >= limit) || (limit - (t + step)) < 1e-14 * std::max(1.0, std::abs(limit));
        if (lands) step = limit - t;

        StateN<N> y_new;
        StateN<N> f_new;

        if (cfg.method == IntegratorMethod::fixed_rk4) {
            const double hh = step;
            const auto k1 = fy;
            const auto k2 = f(t + hh / 2, detail::axpy<N>(y, hh, {{0.5, &k1}}));
            const auto k3 = f(t + hh / 2, detail::axpy<N>(y, hh, {{0.5, &k2}}));
            const auto k4 = f(t + hh, detail::axpy<N>(y, hh, {{1.0, &k3}}));
            y_new = detail::axpy<N>(y, hh, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
            const double t_new = lands ? limit : t + hh;
            f_new = f(t_new, y_new);
            if (!detail::all_finite(y_new)) throw InvalidInput("integrate: state became non-finite");
            ++steps;
            const StepView<N> view{t, t_new, y, y_new, fy, f_new};
            const bool go_on = observer ? observer(view) : true;
            t = t_new;
            y = y_new;
            fy = f_new;
            if (!go_on) {
                if (steps_taken) *steps_taken = steps;
                return IntegrationOutcome::stopped;
            }
            continue;
        }

        // Dormand-Prince 5(4), FSAL.
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const auto& k1 = fy;
        const auto k2 = f(t + c2 * step, detail::axpy<N>(y, step, {{a21, &k1}}));
        const auto k3 = f(t + c3 * step, detail::axpy<N>(y, step, {{a31, &k1}, {a32, &k2}}));
        const auto k4 = f(t + c4 * step, detail::axpy<N>(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const auto k5 = f(t + c5 * step,
                          detail::axpy<N>(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const auto k6 = f(t + step, detail::axpy<N>(y, step,
                                                   {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const double t_new = lands ? limit : t + step;
        y_new = detail::axpy<N>(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        f_new = f(t_new, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                     e7 * f_new[i]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err) || !detail::all_finite(y_new) || !detail::all_finite(f_new))
            err = std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            ++steps;
            const StepView<N> view{t, t_new, y, y_new, fy, f_new};
            const bool go_on = observer ? observer(view) : true;
            t = t_new;
            y = y_new;
            fy = f_new;
            const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // a step clipped by a stop says little about the natural step size
            h = std::min(cfg.h_max, lands ? std::max(h, step * grow) : step * grow);
            if (!go_on) {
                if (steps_taken) *steps_taken = steps;
                return IntegrationOutcome::stopped;
            }
        } else {
            const double shrink = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
            h = step * shrink;
            if (h < kStepUnderflow)
                throw StiffnessError("integrate: step size underflow at t = " + std::to_string(t));
        }
    }
    if (steps_taken) *steps_taken = steps;
    return IntegrationOutcome::completed;
}

}  // namespace autores
