#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace molembed {

// splitmix64-based generator. We avoid <random> engines/distributions so
// streams are identical across standard library implementations; every
// random choice in the toolkit flows from one base seed expanded through
// labeled substreams (see substream_seed).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0,n). Rejection sampling, no modulo bias.
    size_t next_index(size_t n) {
        if (n <= 1) return 0;
        const uint64_t bound = n;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return static_cast<size_t>(r % bound);
    }

    // Box-Muller with cached spare.
    double next_normal(double mean = 0.0, double stddev = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mean + stddev * r * std::cos(theta);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (size_t i = v.size() - 1; i > 0; --i) {
            const size_t j = next_index(i + 1);
            std::swap(v[i], v[j]);
        }
    }

private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Mixes a base seed with a textual label (FNV-1a over the bytes, then one
// splitmix64 round) so components draw from independent streams.
inline uint64_t substream_seed(uint64_t base, std::string_view label) {
    uint64_t h = 0xcbf29ce484222325ull ^ base;
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    Rng mix(h);
    return mix.next_u64();
}

inline Rng make_rng(uint64_t base, std::string_view label) {
    return Rng(substream_seed(base, label));
}

} // namespace molembed
