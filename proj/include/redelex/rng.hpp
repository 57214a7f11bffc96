#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace redelex {

// Deterministic RNG. std::mt19937_64 output is fully specified by the
// standard; the distributions below avoid std::uniform_*_distribution,
// whose results are implementation-defined, so streams replay bit-exactly
// across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed = 0) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double next_range(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // Uniform integer in [0, n). n must be > 0.
    uint64_t next_below(uint64_t n) {
        // Rejection sampling keeps the draw unbiased and deterministic.
        uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    // Derive an independent stream for (seed, index) pairs, e.g. per batch.
    static Rng derive(uint64_t seed, uint64_t index) {
        // SplitMix64 over the pair; decorrelates nearby seeds.
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace redelex
