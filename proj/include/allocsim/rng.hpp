#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace allocsim {

// splitmix64; used to derive well-separated engine seeds from (seed, stream).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

// Deterministic RNG stream. All draws go through the helpers below instead of
// std distributions, so sequences are identical across standard libraries.
class Rng {
public:
    Rng() : engine_(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), n >= 1
    std::uint32_t uniform_below(std::uint32_t n) {
        // Lemire multiply-shift; bias < 2^-32, irrelevant here but cheap to remove
        std::uint64_t x = next_u64() >> 32;
        std::uint64_t m = x * static_cast<std::uint64_t>(n);
        if (static_cast<std::uint32_t>(m) < n) {
            std::uint64_t t = (0x100000000ULL - n) % n;
            while (static_cast<std::uint32_t>(m) < t) {
                x = next_u64() >> 32;
                m = x * static_cast<std::uint64_t>(n);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // index sampled proportionally to non-negative weights; total = sum(weights)
    std::size_t weighted_pick(const std::vector<double>& weights, double total) {
        double target = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (target < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace allocsim
