#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "autores/errors.hpp"
#include "autores/random.hpp"

using namespace autores;

TEST_CASE("substream seeds are pure and distinct") {
    CHECK(substream_seed(42, 7) == substream_seed(42, 7));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(substream_seed(20240601, i));
    CHECK(seen.size() == 1000);
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    // reference value of the SplitMix64 finalizer
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("uniform variates lie in [0, 1) and have the right moments") {
    Rng rng(123);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sq += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(sq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal variates have zero mean and unit variance") {
    Rng rng(99);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("identical seeds give identical streams") {
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("closed-form mean absolute values against sampling") {
    const Distribution cases[] = {Distribution::uniform(-1.0, 1.0), Distribution::uniform(-0.2, 0.6),
                                  Distribution::uniform(0.5, 2.0),  Distribution::gaussian(0.3, 0.7),
                                  Distribution::constant(-0.4),     Distribution::two_point(0.3, 1.0, -2.0)};
    CHECK(Distribution::uniform(-1.0, 1.0).mean_abs() == 0.5);
    CHECK(Distribution::gaussian(0.0, 1.0).mean_abs() == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));
    for (const auto& d : cases) {
        CAPTURE(d.describe());
        Rng rng(77);
        double s = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) s += std::abs(d.sample(rng));
        CHECK(s / n == doctest::Approx(d.mean_abs()).epsilon(0.01));
    }
}

TEST_CASE("malformed descriptors are rejected") {
    CHECK_THROWS_AS(Distribution::uniform(1.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(Distribution::gaussian(0.0, 0.0).validate(), ConfigError);
    CHECK_THROWS_AS(Distribution::two_point(1.5, 1.0, 2.0).validate(), ConfigError);
    CHECK_THROWS_AS(Distribution::constant(std::nan("")).validate(), ConfigError);
    CHECK_NOTHROW(Distribution::two_point(0.5, 1.0, 2.0).validate());
    CHECK(Distribution::two_point(0.5, 1.0, 2.0).support_min() == 1.0);
}
