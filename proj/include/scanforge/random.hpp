#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace scanforge {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Every stream is derived from one root seed through named children so that
// adding a stage never perturbs the draws of earlier stages.
inline uint64_t child_seed(uint64_t seed, std::string_view purpose) {
    uint64_t h = 0xCBF29CE484222325ULL ^ seed;
    for (unsigned char c : purpose) {
        h = (h ^ c) * 0x100000001B3ULL;
    }
    return splitmix64(h);
}

// Deterministic across platforms and standard libraries; std:: distributions
// are not pinned by the standard and must not be used for seeded output.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }

    // [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        return lo + int(next_below(uint64_t(hi - lo) + 1));
    }

    bool coin() { return (next_u64() & 1ULL) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // first k of a partial Fisher-Yates pass
    template <typename T>
    std::vector<T> sample(std::vector<T> pool, size_t k) {
        if (k > pool.size()) k = pool.size();
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + size_t(next_below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[size_t(next_below(v.size()))];
    }

private:
    uint64_t state_;
};

}  // namespace scanforge
