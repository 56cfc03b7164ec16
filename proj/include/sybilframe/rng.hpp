#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sybilframe {

// splitmix64 finalizer; used both to expand seeds and to derive substreams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed for a named substream of a master seed. All experiment
// randomness is drawn from streams derived this way, so runs are reproducible
// and independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = mix64(master);
    for (std::uint64_t t : tags) s = mix64(s ^ mix64(t));
    return s;
}

// Thin deterministic wrapper around mt19937_64. Floating-point draws bypass
// std::uniform_real_distribution so streams are identical across standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        double v = lo + uniform01() * (hi - lo);
        if (v >= hi) v = std::nextafter(hi, lo);
        return v;
    }

    // Uniform integer in [0, n); n must be positive. Rejection sampling keeps
    // the draw unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    // First k elements of a uniform permutation of items (sampling without
    // replacement).
    template <typename T>
    std::vector<T> sample_without_replacement(std::vector<T> items, std::size_t k) {
        for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
            std::size_t j = i + uniform_index(items.size() - i);
            std::swap(items[i], items[j]);
        }
        items.resize(k);
        return items;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sybilframe
