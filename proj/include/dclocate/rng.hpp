#ifndef DCLOCATE_RNG_HPP
#define DCLOCATE_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace dclocate {

// SplitMix64. Used instead of <random> distributions so that seeded draws
// are identical across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) { return next() % n; }

    // k distinct indices from [0, n) by a partial Fisher-Yates shuffle.
    std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        for (std::size_t i = 0; i < k && i < n; ++i) {
            const auto j = i + static_cast<std::size_t>(index(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k < n ? k : n);
        return pool;
    }

private:
    std::uint64_t state_;
};

// Generator for multi-start number `start` under a run seed:
// SplitMix64(mix(seed + (start + 1) * 0x9E3779B97F4A7C15)).
inline SplitMix64 start_generator(std::uint64_t seed, std::uint64_t start) {
    return SplitMix64(SplitMix64::mix(seed + (start + 1) * 0x9E3779B97F4A7C15ULL));
}

}  // namespace dclocate

#endif  // DCLOCATE_RNG_HPP
