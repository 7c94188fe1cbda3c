#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace pushsim {

// splitmix64 finalizer, used as the one published mixing function for every
// derived seed in the project.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-run stream seed. Folding (cell, run) through mix64 keeps ensembles
// reproducible no matter which worker executes which run.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t run) {
    return mix64(mix64(mix64(master) ^ cell) ^ run);
}

// mt19937_64 with self-owned distributions: the standard engine is
// bit-reproducible across platforms, the standard distributions are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    // Unbiased draw from [0, bound) by mask rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t mask = bound <= 1 ? 0 : ~0ULL >> std::countl_zero(bound - 1);
        for (;;) {
            std::uint64_t r = eng_() & mask;
            if (r < bound) return r;
        }
    }

    std::uint32_t below32(std::uint32_t bound) {
        return static_cast<std::uint32_t>(below(bound));
    }

    // Uniform in [0, 1), 53 bits.
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

}  // namespace pushsim
