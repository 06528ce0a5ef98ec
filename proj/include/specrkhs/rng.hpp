#pragma once

#include <cstdint>
#include <random>

namespace specrkhs {

// Portable uniform draws on top of mt19937_64: the standard distributions are
// implementation-defined, which would break bit-identical replay across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Open interval (0,1): never returns an endpoint.
    double uniform_open() {
        double u;
        do { u = uniform(); } while (u == 0.0);
        return u;
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace specrkhs
