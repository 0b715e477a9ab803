// Synthetic ground truth: draw global ranks from a configurable family, then
// derive sampled ranks by drawing n-1 irrelevant items per user from the
// catalog excluding the relevant item (so an item outranks it with probability
// exactly (R-1)/(N-1) per draw).
//
// All randomness comes from SplitMix64 (Steele/Lea/Flood mixing constants);
// per-user substreams are derived from (seed, user index), so generation is
// reproducible and order-independent.

#pragma once

#include <cstdint>
#include <optional>

#include "rankdist/types.hpp"

namespace rankdist {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t z);

// Deterministic per-index substream of a master seed.
SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

struct TruthSpec {
    enum class Family { Uniform, Zipf, Geometric, Custom };

    int num_items = 0;
    int num_users = 0;
    Family family = Family::Uniform;
    double param = 1.0;                // Zipf exponent s > 0, or Geometric p in (0,1)
    std::optional<RankPmf> custom;     // required iff family == Custom
    std::uint64_t seed = 0;

    // The family pmf over ranks 1..num_items.
    RankPmf pmf() const;
};

// M i.i.d. global ranks from the family pmf.
RankDataset generate_truth(const TruthSpec& spec);

// Per-user sampled ranks: r_u = 1 + #(sampled irrelevant items outranking the
// relevant one). WithReplacement draws n-1 independent items; WithoutReplacement
// draws n-1 distinct items (sequential hypergeometric).
SampledRanks sample_ranks(const RankDataset& ds, int pool_size, Scheme scheme,
                          std::uint64_t seed);

}  // namespace rankdist
