#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace fairaudit {

// Counter-based pseudo-random stream: output i is the SplitMix64 finalizer
// applied to key + (i+1) * golden-gamma. Every draw is a pure function of
// (key, counter), so substreams assigned by index reproduce bit-identically
// no matter how work is scheduled across threads.
namespace rng_detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace rng_detail

class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    static std::uint64_t value_at(std::uint64_t key, std::uint64_t counter) {
        return rng_detail::mix64(key + (counter + 1) * rng_detail::kGolden);
    }

    std::uint64_t next_u64() { return value_at(key_, counter_++); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double next_normal() {
        double u1 = 1.0 - next_unit();  // (0, 1]
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Uniform integer in [0, bound); bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Derives an independent stream key from a master seed, a purpose tag and an
// index (replicate number, permutation number, row, ...).
inline std::uint64_t derive_stream_key(std::uint64_t seed, std::string_view purpose,
                                       std::uint64_t index) {
    std::uint64_t h = rng_detail::mix64(seed ^ rng_detail::fnv1a(purpose));
    return rng_detail::mix64(h + (index + 1) * rng_detail::kGolden);
}

// Fisher-Yates shuffle driven by the stream.
template <typename T>
void shuffle(std::vector<T>& items, RandomStream& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, RandomStream& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx, rng);
    return idx;
}

}  // namespace fairaudit
