#ifndef VOTERLAB_RNG_HPP
#define VOTERLAB_RNG_HPP

//! \file rng.hpp
//! Deterministic random streams. All draws are built from raw 64-bit engine
//! output so results do not depend on the standard library's distributions.

#include <cstdint>
#include <random>

namespace voterlab {

// splitmix64 finaliser: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-replicate seed. The key packs model (8 bits), L (20 bits) and replicate
// (36 bits); since mix64 is a bijection, distinct keys give distinct seeds for
// a fixed master seed.
constexpr std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t model_index,
                                       std::uint64_t L, std::uint64_t replicate) noexcept {
    const std::uint64_t key = (model_index & 0xffULL) << 56 | (L & 0xfffffULL) << 36 |
                              (replicate & 0xfffffffffULL);
    return mix64(key ^ mix64(master));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n), n > 0. Lemire's multiply-and-reject, unbiased.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x = next();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                x = next();
                m = static_cast<unsigned __int128>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint8_t coin() { return static_cast<std::uint8_t>(next() >> 63); }

    friend bool operator==(const Rng&, const Rng&) = default;

  private:
    std::mt19937_64 engine_;
};

}  // namespace voterlab

#endif  // VOTERLAB_RNG_HPP
