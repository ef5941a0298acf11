#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>

namespace crewpair {

// Seeded random stream. mt19937_64 output is fully specified by the
// standard; the bounded-draw helpers below avoid std::uniform_*
// distributions, whose sequences differ across standard libraries, so a
// seed reproduces the same run on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, n). Rejection sampling, no modulo bias.
    std::size_t uniform_index(std::size_t n) {
        assert(n > 0);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return static_cast<std::size_t>(v % n);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Maps float seeds in [0,1) onto the integer seed space.
    static std::uint64_t seed_from_unit_float(double f) {
        return static_cast<std::uint64_t>(std::llround(f * 0x1.0p53));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace crewpair
