// Core domain types: global/sampled rank data, rank pmfs, metric specs.
//
// Ranks are 1-based throughout the public API (R in [1,N], r in [1,n]);
// internal storage is 0-indexed with the conversion at the accessor boundary.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankdist {

// Thrown when an argument is outside its documented domain.
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical routine cannot produce a result (singular system, ...).
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme : std::uint8_t {
    WithReplacement,
    WithoutReplacement,
};

inline const char* to_string(Scheme s) {
    return s == Scheme::WithReplacement ? "wr" : "wor";
}

// Global ranks R_u over a catalog of N items, one relevant item per user.
struct RankDataset {
    int num_items = 0;             // N >= 2
    std::vector<int> ranks;        // R_u in [1, N], size M >= 1

    RankDataset() = default;
    RankDataset(int n_items, std::vector<int> r) : num_items(n_items), ranks(std::move(r)) {
        validate();
    }

    int num_users() const { return static_cast<int>(ranks.size()); }

    void validate() const {
        if (num_items < 2)
            throw domain_error("RankDataset: num_items must be >= 2, got " + std::to_string(num_items));
        if (ranks.empty())
            throw domain_error("RankDataset: at least one user required");
        for (int r : ranks)
            if (r < 1 || r > num_items)
                throw domain_error("RankDataset: rank " + std::to_string(r) + " outside [1, " +
                                   std::to_string(num_items) + "]");
    }
};

// Sampled ranks r_u over a pool of n items (the relevant item plus n-1 sampled ones).
struct SampledRanks {
    int num_items = 0;             // N, catalog the pool was drawn from
    int pool_size = 0;             // n in [2, N]
    Scheme scheme = Scheme::WithReplacement;
    std::vector<int> ranks;        // r_u in [1, n], size M >= 1

    SampledRanks() = default;
    SampledRanks(int n_items, int n_pool, Scheme sch, std::vector<int> r)
        : num_items(n_items), pool_size(n_pool), scheme(sch), ranks(std::move(r)) {
        validate();
    }

    int num_users() const { return static_cast<int>(ranks.size()); }

    void validate() const {
        if (num_items < 2)
            throw domain_error("SampledRanks: num_items must be >= 2");
        if (pool_size < 2 || pool_size > num_items)
            throw domain_error("SampledRanks: pool_size must be in [2, num_items], got " +
                               std::to_string(pool_size));
        if (ranks.empty())
            throw domain_error("SampledRanks: at least one user required");
        for (int r : ranks)
            if (r < 1 || r > pool_size)
                throw domain_error("SampledRanks: rank " + std::to_string(r) + " outside [1, " +
                                   std::to_string(pool_size) + "]");
    }
};

// Probability mass function over ranks 1..L.
class RankPmf {
public:
    RankPmf() = default;

    explicit RankPmf(std::vector<double> mass) : mass_(std::move(mass)) { validate(); }

    static RankPmf uniform(int support) {
        if (support < 1) throw domain_error("RankPmf::uniform: support must be >= 1");
        return RankPmf(std::vector<double>(static_cast<std::size_t>(support), 1.0 / support));
    }

    static RankPmf point_mass(int rank, int support) {
        if (support < 1 || rank < 1 || rank > support)
            throw domain_error("RankPmf::point_mass: rank outside [1, support]");
        std::vector<double> m(static_cast<std::size_t>(support), 0.0);
        m[static_cast<std::size_t>(rank - 1)] = 1.0;
        return RankPmf(std::move(m));
    }

    int support() const { return static_cast<int>(mass_.size()); }

    // 1-based rank accessor.
    double at_rank(int rank) const {
        if (rank < 1 || rank > support())
            throw domain_error("RankPmf: rank " + std::to_string(rank) + " outside [1, " +
                               std::to_string(support()) + "]");
        return mass_[static_cast<std::size_t>(rank - 1)];
    }

    std::span<const double> mass() const { return mass_; }

    // P(R <= rank); non-decreasing in rank.
    double cdf(int rank) const {
        if (rank < 1 || rank > support())
            throw domain_error("RankPmf::cdf: rank outside support");
        double c = 0.0;
        for (int i = 0; i < rank; ++i) c += mass_[static_cast<std::size_t>(i)];
        return c;
    }

    void validate() const {
        if (mass_.empty()) throw domain_error("RankPmf: empty mass vector");
        double sum = 0.0;
        for (double m : mass_) {
            if (!(m >= -1e-12) || std::isnan(m))
                throw domain_error("RankPmf: negative mass entry " + std::to_string(m));
            sum += m;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw domain_error("RankPmf: mass sums to " + std::to_string(sum) + ", expected 1");
    }

private:
    std::vector<double> mass_;
};

enum class MetricKind : std::uint8_t { Recall, Precision, NDCG, AP, AUC };

inline const char* to_string(MetricKind k) {
    switch (k) {
        case MetricKind::Recall: return "Recall";
        case MetricKind::Precision: return "Precision";
        case MetricKind::NDCG: return "NDCG";
        case MetricKind::AP: return "AP";
        case MetricKind::AUC: return "AUC";
    }
    return "?";
}

// Top-K metric selector: which weight function, and the cutoff K.
struct MetricSpec {
    MetricKind kind = MetricKind::Recall;
    int cutoff = 10;   // K >= 1

    MetricSpec() = default;
    MetricSpec(MetricKind k, int K) : kind(k), cutoff(K) {
        if (K < 1) throw domain_error("MetricSpec: cutoff must be >= 1");
    }
};

}  // namespace rankdist
