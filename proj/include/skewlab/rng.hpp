#pragma once

#include <cstdint>
#include <vector>

namespace skewlab {

// splitmix64: tiny, seed-stable PRNG. Every randomized routine takes an
// explicit (seed, stream) pair so results never depend on call order or
// thread scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : state_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() {
        return (next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0,n)
    uint64_t next_below(uint64_t n) {
        return next_u64() % n;
    }

    // deterministic k-subsample of indices 0..n-1 (partial Fisher-Yates)
    std::vector<size_t> subsample(size_t n, size_t k) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        if (k >= n) return idx;
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + static_cast<size_t>(next_below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    uint64_t state_;
};

}  // namespace skewlab
