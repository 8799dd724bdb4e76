#ifndef CATGAN_RNG_HPP
#define CATGAN_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>

namespace catgan {

// splitmix64 finalizer, used to derive independent seeds from a master seed
// plus a handful of stream coordinates (round, child index, purpose tag...).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    return mix64(mix64(mix64(mix64(master) ^ a) ^ b) ^ c);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }

    // uniform in the open interval (0,1); safe as a -log(-log u) argument
    double uniform01() {
        const std::uint64_t bits = engine_() >> 11;   // 53 bits
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double normal() {
        return normal_(engine_);
    }

    double gumbel() {
        return -std::log(-std::log(uniform01()));
    }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(engine_);
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace catgan

#endif // CATGAN_RNG_HPP
