#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adasurv {

// All randomness in the library flows from one user-supplied 64-bit seed.
// Component streams are derived by hashing a label and an index into the
// seed, so adding a component never shifts the draws of another.
//
// mt19937_64 is fully specified by the standard; the std:: distributions are
// not, so bounded ints and unit reals are produced by hand below. Outputs
// are therefore bit-identical across platforms and standard libraries.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, std::string_view component, uint64_t index = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label
    for (unsigned char c : component) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    uint64_t state = master ^ h;
    uint64_t mixed = splitmix64(state);
    state = mixed ^ (index * 0x9e3779b97f4a7c15ULL);
    return splitmix64(state);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n) via rejection sampling.
    int next_below(int n) {
        const uint64_t bound = static_cast<uint64_t>(n);
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<int>(x % bound);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace adasurv
