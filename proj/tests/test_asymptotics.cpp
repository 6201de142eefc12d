#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "autores/asymptotics.hpp"
#include "autores/errors.hpp"

using namespace autores;

namespace {

const ModelParams kBase{1.0, 0.5, 0.2};

// Minus-branch coefficients for (1, 1/2, 1/5) obtained by symbolic substitution
// of the series into the equations and solving order by order in exact arithmetic.
const std::vector<double> kPsiTable{2.6179938779914944, -1.1547005383792515, -0.1849001794597505,
                                    -0.6811745887643782, 3.066744991516743,  2.019129262216798};
const std::vector<double> kRTable{0.17320508075688773, -0.11547005383792515, 1.0207404665953512,
                                  0.2903628761150965,  2.2361592580407788,  -11.41964049381195};

double log_slope(const SeriesCoeffs& s, int component, double t1, double t2) {
    const double a = std::abs(residual(s, t1)[component]);
    const double b = std::abs(residual(s, t2)[component]);
    return std::log(b / a) / std::log(t2 / t1);
}

}  // namespace

TEST_CASE("leading coefficients in closed form") {
    const auto lc = leading_coeffs(kBase, Branch::minus);
    CHECK(lc.psi0 == doctest::Approx(5.0 * std::numbers::pi / 6.0).epsilon(1e-15));
    CHECK(lc.r0 == doctest::Approx(0.1 * std::sqrt(3.0)).epsilon(1e-15));
    CHECK(lc.psi1 == doctest::Approx(-2.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(lc.r1 == doctest::Approx(-0.2 / std::sqrt(3.0)).epsilon(1e-15));

    const auto lp = leading_coeffs(kBase, Branch::plus);
    CHECK(lp.psi0 == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-15));
    CHECK(lp.r0 == doctest::Approx(-0.1 * std::sqrt(3.0)).epsilon(1e-15));
    CHECK(std::sin(lp.psi0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("recurrence matches the exact coefficient table") {
    const auto s = extend_coeffs(kBase, Branch::minus, 5);
    REQUIRE(s.order() == 5);
    for (int j = 0; j <= 5; ++j) {
        CAPTURE(j);
        CHECK(std::abs(s.psi_coeffs()[j] - kPsiTable[j]) <= 1e-13 * (1.0 + std::abs(kPsiTable[j])));
        CHECK(std::abs(s.r_coeffs()[j] - kRTable[j]) <= 1e-13 * (1.0 + std::abs(kRTable[j])));
    }
}

TEST_CASE("leading coefficients agree with the recurrence on both branches") {
    for (Branch b : {Branch::minus, Branch::plus}) {
        const auto s = extend_coeffs(ModelParams{2.0, 0.3, -0.7}, b, 3);
        const auto lc = leading_coeffs(ModelParams{2.0, 0.3, -0.7}, b);
        CHECK(s.psi_coeffs()[0] == doctest::Approx(lc.psi0).epsilon(1e-15));
        CHECK(s.r_coeffs()[0] == doctest::Approx(lc.r0).epsilon(1e-15));
        CHECK(s.psi_coeffs()[1] == doctest::Approx(lc.psi1).epsilon(1e-13));
        CHECK(s.r_coeffs()[1] == doctest::Approx(lc.r1).epsilon(1e-13));
    }
}

TEST_CASE("reference evaluation at order one") {
    const auto s = extend_coeffs(kBase, Branch::minus, 1);
    const auto p = eval_reference(s, 100.0);
    CHECK(p.r == doctest::Approx(100.17205038).epsilon(1e-10));
    CHECK(p.psi == doctest::Approx(2.60644687).epsilon(1e-8));
    const auto full = eval_reference_full(s, 100.0);
    CHECK(full.dr == doctest::Approx(1.0 + 0.11547005383792515e-4).epsilon(1e-14));
    CHECK(full.dpsi == doctest::Approx(1.1547005383792515e-4).epsilon(1e-12));
    CHECK_THROWS_AS(eval_reference(s, 0.0), DomainError);
    CHECK_THROWS_AS(eval_reference(s, -1.0), DomainError);
}

TEST_CASE("residual decays one order faster per added term") {
    for (Branch b : {Branch::minus, Branch::plus}) {
        const auto full = extend_coeffs(kBase, b, 6);
        for (int J = 1; J <= 4; ++J) {
            CAPTURE(J);
            const auto s = full.truncated(J);
            const double slope_psi = log_slope(s, 1, 1e3, 1e4);
            CHECK(slope_psi == doctest::Approx(-(J + 1.0)).epsilon(0.02));
            // the r residual carries an extra factor lambda tau; at order 4 it
            // reaches the rounding floor near tau = 1e4, so measure it earlier
            const double slope_r = log_slope(s, 0, 1e2, 1e3);
            CHECK(slope_r <= -J + 0.05);
        }
    }
}

TEST_CASE("residual stays resolvable far out") {
    const auto s = extend_coeffs(kBase, Branch::minus, 3);
    const double rp = std::abs(residual(s, 1e4)[1]);
    CHECK(rp > 0.0);
    CHECK(rp < 1e-14);
    const auto s0 = extend_coeffs(kBase, Branch::minus, 0);
    CHECK(residual(s0, 50.0)[1] == 0.0);
}

TEST_CASE("degenerate and out-of-range parameters") {
    CHECK_THROWS_AS(extend_coeffs(ModelParams{1.0, 1.0, 0.2}, Branch::minus, 2), DegenerateParameters);
    CHECK_THROWS_AS(extend_coeffs(ModelParams{1.0, 1.2, 0.2}, Branch::minus, 2), DomainError);
    CHECK_THROWS_AS(extend_coeffs(ModelParams{1.0, 0.0, 0.2}, Branch::minus, 2), DomainError);
    CHECK_THROWS_AS(extend_coeffs(kBase, Branch::minus, kMaxSeriesOrder + 1), DomainError);
    CHECK_THROWS_AS(extend_coeffs(kBase, Branch::minus, -1), DomainError);
}

TEST_CASE("conditioning warning near delta = 1") {
    CHECK_FALSE(extend_coeffs(kBase, Branch::minus, 4).conditioning_warning());
    CHECK(extend_coeffs(ModelParams{1.0, 1.0 - 1e-9, 0.2}, Branch::minus, 4).conditioning_warning());
}

TEST_CASE("truncation keeps the leading coefficients") {
    const auto s = extend_coeffs(kBase, Branch::plus, 4);
    const auto t = s.truncated(2);
    CHECK(t.order() == 2);
    CHECK(t.branch() == Branch::plus);
    CHECK(t.r_coeffs()[2] == s.r_coeffs()[2]);
    CHECK_THROWS_AS((void)s.truncated(5), DomainError);
    CHECK(branch_from_string("plus") == Branch::plus);
    CHECK_THROWS_AS(branch_from_string("up"), InvalidInput);
}
