#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "autores/errors.hpp"
#include "autores/random.hpp"

namespace autores {

std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index * 0xD1B54A32D192ED03ULL + 1));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void Distribution::validate() const {
    if (!std::isfinite(p0) || !std::isfinite(p1) || !std::isfinite(p2))
        throw ConfigError("distribution parameters must be finite");
    switch (kind) {
        case Kind::uniform:
            if (!(p0 < p1)) throw ConfigError("uniform distribution needs lo < hi");
            break;
        case Kind::gaussian:
            if (!(p1 > 0.0)) throw ConfigError("gaussian distribution needs sd > 0");
            break;
        case Kind::constant:
            break;
        case Kind::two_point:
            if (!(p0 >= 0.0 && p0 <= 1.0)) throw ConfigError("two-point distribution needs 0 <= p <= 1");
            break;
    }
}

double Distribution::support_min() const {
    switch (kind) {
        case Kind::uniform: return p0;
        case Kind::gaussian: return -std::numeric_limits<double>::infinity();
        case Kind::constant: return p0;
        case Kind::two_point:
            if (p0 == 1.0) return p1;
            if (p0 == 0.0) return p2;
            return std::min(p1, p2);
    }
    return p0;
}

double Distribution::sample(Rng& rng) const {
    switch (kind) {
        case Kind::uniform: return rng.uniform(p0, p1);
        case Kind::gaussian: return p0 + p1 * rng.normal();
        case Kind::constant: return p0;
        case Kind::two_point: return rng.uniform() < p0 ? p1 : p2;
    }
    return p0;
}

double Distribution::mean_abs() const {
    switch (kind) {
        case Kind::uniform:
            if (p0 >= 0.0) return 0.5 * (p0 + p1);
            if (p1 <= 0.0) return -0.5 * (p0 + p1);
            return (p0 * p0 + p1 * p1) / (2.0 * (p1 - p0));
        case Kind::gaussian:
            return p1 * std::sqrt(2.0 / std::numbers::pi) * std::exp(-p0 * p0 / (2.0 * p1 * p1)) +
                   p0 * std::erf(p0 / (p1 * std::numbers::sqrt2));
        case Kind::constant: return std::abs(p0);
        case Kind::two_point: return p0 * std::abs(p1) + (1.0 - p0) * std::abs(p2);
    }
    return 0.0;
}

std::string Distribution::describe() const {
    std::ostringstream s;
    s << std::setprecision(17);
    switch (kind) {
        case Kind::uniform: s << "uniform(" << p0 << ", " << p1 << ")"; break;
        case Kind::gaussian: s << "gaussian(" << p0 << ", " << p1 << ")"; break;
        case Kind::constant: s << "constant(" << p0 << ")"; break;
        case Kind::two_point: s << "two_point(" << p0 << ", " << p1 << ", " << p2 << ")"; break;
    }
    return s.str();
}

}  // namespace autores
