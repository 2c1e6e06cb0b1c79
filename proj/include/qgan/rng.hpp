#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qgan {

// Stream splitter for deriving independent sub-seeds from one master seed.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Seeded generator producing the same stream on every platform. The standard
// distributions are implementation-defined, so uniforms are mapped from raw
// 64-bit draws by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

// Cumulative sums for inverse-CDF sampling; the last entry is forced to 1 so
// a uniform draw can never fall past the end.
std::vector<double> cumulative_distribution(const std::vector<double>& probs);

// Index of the bin a uniform draw lands in.
int sample_index(const std::vector<double>& cdf, Rng& rng);

} // namespace qgan
