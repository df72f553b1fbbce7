#pragma once

#include <cstdint>
#include <string_view>

namespace stilus {

// SplitMix64. Used everywhere randomness is needed so that results are
// bit-reproducible across platforms and standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Deterministic Fisher-Yates shuffle.
template <typename Vec>
void shuffle(Vec& v, SplitMix64& rng) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(v.size() - i));
        using std::swap;
        swap(v[i], v[j]);
    }
}

}  // namespace stilus
