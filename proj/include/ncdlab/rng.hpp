#pragma once

#include <cstdint>
#include <random>

namespace ncdlab {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for stream `stream` of a run seeded with `seed`. Every randomized
// operation keys its generator this way so results do not depend on the order
// in which work items execute.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// mt19937_64 with portable bounded draws. std::uniform_*_distribution is
// implementation-defined, so fixtures would not survive a toolchain change.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound) by rejection sampling; bound > 0.
    std::uint64_t below(std::uint64_t bound);

    // Uniform double in [0, 1) with 53 random bits.
    double unit();

    // Standard normal via Box-Muller (test data generation only).
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace ncdlab
