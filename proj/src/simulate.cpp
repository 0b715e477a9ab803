#include "rankdist/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rankdist {

namespace {

// Distinct stream tags so the same master seed can drive truth generation and
// negative sampling without correlating them.
constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
constexpr std::uint64_t kSampleStream = 0x73616d706cULL;

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

RankPmf TruthSpec::pmf() const {
    if (num_items < 2) throw domain_error("TruthSpec: num_items must be >= 2");
    const std::size_t n = static_cast<std::size_t>(num_items);
    std::vector<double> mass(n);
    switch (family) {
        case Family::Uniform:
            std::fill(mass.begin(), mass.end(), 1.0 / num_items);
            break;
        case Family::Zipf: {
            if (!(param > 0.0)) throw domain_error("TruthSpec: Zipf exponent must be > 0");
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mass[i] = std::pow(static_cast<double>(i + 1), -param);
                total += mass[i];
            }
            for (double& m : mass) m /= total;
            break;
        }
        case Family::Geometric: {
            if (!(param > 0.0 && param < 1.0))
                throw domain_error("TruthSpec: Geometric p must be in (0, 1)");
            // truncated to 1..N and renormalized
            double total = 0.0;
            double term = param;
            for (std::size_t i = 0; i < n; ++i) {
                mass[i] = term;
                total += term;
                term *= 1.0 - param;
            }
            for (double& m : mass) m /= total;
            break;
        }
        case Family::Custom:
            if (!custom) throw domain_error("TruthSpec: Custom family needs a pmf");
            if (custom->support() != num_items)
                throw domain_error("TruthSpec: custom pmf support must equal num_items");
            return *custom;
    }
    return RankPmf(std::move(mass));
}

RankDataset generate_truth(const TruthSpec& spec) {
    if (spec.num_users < 1) throw domain_error("generate_truth: num_users must be >= 1");
    const RankPmf dist = spec.pmf();

    std::vector<double> cdf(dist.mass().begin(), dist.mass().end());
    for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
    cdf.back() = 1.0;

    std::vector<int> ranks(static_cast<std::size_t>(spec.num_users));
    const std::uint64_t stream_seed = mix64(spec.seed ^ kTruthStream);
    for (std::size_t u = 0; u < ranks.size(); ++u) {
        const double x = substream(stream_seed, u).next_double();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        ranks[u] = static_cast<int>(it - cdf.begin()) + 1;
    }
    return RankDataset(spec.num_items, std::move(ranks));
}

SampledRanks sample_ranks(const RankDataset& ds, int pool_size, Scheme scheme,
                          std::uint64_t seed) {
    if (pool_size < 2 || pool_size > ds.num_items)
        throw domain_error("sample_ranks: pool_size must be in [2, num_items]");

    const std::uint64_t n_irrelevant = static_cast<std::uint64_t>(ds.num_items) - 1;
    const int draws = pool_size - 1;
    std::vector<int> sampled(ds.ranks.size());
    const std::uint64_t stream_seed = mix64(seed ^ kSampleStream);

    for (std::size_t u = 0; u < sampled.size(); ++u) {
        SplitMix64 rng = substream(stream_seed, u);
        const std::uint64_t above = static_cast<std::uint64_t>(ds.ranks[u]) - 1;
        int outranked = 0;
        if (scheme == Scheme::WithReplacement) {
            for (int i = 0; i < draws; ++i)
                if (rng.next_below(n_irrelevant) < above) ++outranked;
        } else {
            std::uint64_t marked = above;
            std::uint64_t pool = n_irrelevant;
            for (int i = 0; i < draws; ++i) {
                if (rng.next_below(pool) < marked) {
                    ++outranked;
                    --marked;
                }
                --pool;
            }
        }
        sampled[u] = outranked + 1;
    }
    return SampledRanks(ds.num_items, pool_size, scheme, std::move(sampled));
}

}  // namespace rankdist
