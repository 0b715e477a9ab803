// Top-K evaluation metrics over rank data and rank distributions.
//
// Every metric is the average of a rank-importance weight, counted only when
// the rank clears the cutoff:
//
//   metric@K = (1/M) sum_u 1{R_u <= K} * w_metric(R_u)
//
// with w_Recall(R) = 1, w_Precision(R) = 1/K, w_NDCG(R) = 1/log2(R+1),
// w_AP(R) = 1/R, w_AUC(R) = (N-R)/(N-1). The single-relevant-item setting is
// assumed throughout: Precision divides by the requested cutoff K.

#pragma once

#include <span>

#include "rankdist/types.hpp"

namespace rankdist {

// 1{R <= K} * w_kind(R) for a catalog of total_items ranks.
double metric_weight(MetricKind kind, int rank, int total_items, int cutoff);

// (1/M) sum_u weight(R_u) over global ranks.
double exact_metric(const RankDataset& ds, const MetricSpec& spec);

// Same averaging applied naively to sampled ranks r_u over support n. This is
// the uncorrected baseline; it estimates a different quantity than the global
// metric and is kept for comparison output only. Requires cutoff <= pool size.
double sampled_metric(const SampledRanks& sr, const MetricSpec& spec);

// sum_{R=1}^{K} pmf(R) * w_kind(R); equals exact_metric when pmf is the
// empirical pmf of the dataset.
double metric_from_pmf(const RankPmf& pmf, const MetricSpec& spec);

// Empirical pmf of ranks over support 1..support: pmf(v) = count(v)/M.
RankPmf empirical_pmf(std::span<const int> ranks, int support);

}  // namespace rankdist
