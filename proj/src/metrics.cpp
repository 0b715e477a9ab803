#include "rankdist/metrics.hpp"

#include <cmath>

namespace rankdist {

double metric_weight(MetricKind kind, int rank, int total_items, int cutoff) {
    if (rank < 1 || rank > total_items)
        throw domain_error("metric_weight: rank " + std::to_string(rank) + " outside [1, " +
                           std::to_string(total_items) + "]");
    if (cutoff < 1 || cutoff > total_items)
        throw domain_error("metric_weight: cutoff " + std::to_string(cutoff) + " outside [1, " +
                           std::to_string(total_items) + "]");
    if (rank > cutoff) return 0.0;
    switch (kind) {
        case MetricKind::Recall:
            return 1.0;
        case MetricKind::Precision:
            return 1.0 / cutoff;
        case MetricKind::NDCG:
            return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
        case MetricKind::AP:
            return 1.0 / rank;
        case MetricKind::AUC:
            // total_items >= 2 is implied by rank/cutoff validation only when
            // total_items >= 2; a 1-item catalog has no pairwise comparisons.
            if (total_items < 2)
                throw domain_error("metric_weight: AUC needs at least 2 items");
            return static_cast<double>(total_items - rank) / (total_items - 1);
    }
    throw domain_error("metric_weight: unknown metric kind");
}

double exact_metric(const RankDataset& ds, const MetricSpec& spec) {
    if (spec.cutoff > ds.num_items)
        throw domain_error("exact_metric: cutoff exceeds catalog size");
    double acc = 0.0;
    for (int r : ds.ranks) acc += metric_weight(spec.kind, r, ds.num_items, spec.cutoff);
    return acc / ds.num_users();
}

double sampled_metric(const SampledRanks& sr, const MetricSpec& spec) {
    if (spec.cutoff > sr.pool_size)
        throw domain_error("sampled_metric: cutoff " + std::to_string(spec.cutoff) +
                           " exceeds pool size " + std::to_string(sr.pool_size));
    double acc = 0.0;
    for (int r : sr.ranks) acc += metric_weight(spec.kind, r, sr.pool_size, spec.cutoff);
    return acc / sr.num_users();
}

double metric_from_pmf(const RankPmf& pmf, const MetricSpec& spec) {
    const int support = pmf.support();
    if (spec.cutoff > support)
        throw domain_error("metric_from_pmf: cutoff exceeds pmf support");
    double acc = 0.0;
    for (int rank = 1; rank <= spec.cutoff; ++rank)
        acc += pmf.at_rank(rank) * metric_weight(spec.kind, rank, support, spec.cutoff);
    return acc;
}

RankPmf empirical_pmf(std::span<const int> ranks, int support) {
    if (ranks.empty()) throw domain_error("empirical_pmf: empty input");
    if (support < 1) throw domain_error("empirical_pmf: support must be >= 1");
    std::vector<double> counts(static_cast<std::size_t>(support), 0.0);
    for (int v : ranks) {
        if (v < 1 || v > support)
            throw domain_error("empirical_pmf: value " + std::to_string(v) + " outside [1, " +
                               std::to_string(support) + "]");
        counts[static_cast<std::size_t>(v - 1)] += 1.0;
    }
    const double inv_m = 1.0 / static_cast<double>(ranks.size());
    for (double& c : counts) c *= inv_m;
    return RankPmf(std::move(counts));
}

}  // namespace rankdist
