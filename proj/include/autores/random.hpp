#pragma once

// Seeded random streams and the jump-size distribution descriptors.

#include <cstdint>
#include <random>
#include <string>

namespace autores {

/// SplitMix64 finalizer; used to derive independent per-item substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `index` under `master`. Pure function of its arguments.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

/// mt19937_64 with platform-independent conversions to real variates.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller, no cached second variate).
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Distribution of a jump size or jump position.
struct Distribution {
    enum class Kind { uniform, gaussian, constant, two_point };

    Kind kind = Kind::constant;
    double p0 = 0.0;  ///< uniform: lo   gaussian: mean  constant: value  two_point: p
    double p1 = 0.0;  ///< uniform: hi   gaussian: sd                     two_point: v1
    double p2 = 0.0;  ///<                                                two_point: v2

    static Distribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi, 0.0}; }
    static Distribution gaussian(double mean, double sd) { return {Kind::gaussian, mean, sd, 0.0}; }
    static Distribution constant(double v) { return {Kind::constant, v, 0.0, 0.0}; }
    /// v1 with probability p, v2 otherwise.
    static Distribution two_point(double p, double v1, double v2) {
        return {Kind::two_point, p, v1, v2};
    }

    /// Throws ConfigError on malformed parameters.
    void validate() const;
    /// Smallest value the distribution can produce (-inf for gaussian).
    [[nodiscard]] double support_min() const;
    [[nodiscard]] double sample(Rng& rng) const;
    /// E|X|, in closed form.
    [[nodiscard]] double mean_abs() const;
    [[nodiscard]] std::string describe() const;
};

}  // namespace autores
