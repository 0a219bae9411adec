#pragma once

#include <cstdint>
#include <random>

namespace fracfp {

// Deterministic uniform generator. The double mapping is fixed here rather
// than delegated to std::uniform_real_distribution, whose stream is not
// pinned by the standard; the same seed must reproduce identical output on
// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // in [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::uint64_t raw() { return eng_(); }

    // integer in [0, n)
    std::uint64_t index(std::uint64_t n) { return eng_() % n; }

private:
    std::mt19937_64 eng_;
};

}  // namespace fracfp
