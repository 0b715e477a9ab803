// Estimators that recover the global rank distribution P(R) (or corrected
// metric values) from sampled ranks:
//
//   mle_em:  EM for the binomial-mixture likelihood, grouped-by-r update.
//   wmle_em: weighted EM emphasizing small sampled ranks, w(r) = w_kind(r/C).
//   mes:     maximal entropy with a squared distribution-distance penalty,
//            maximized by exponentiated-gradient ascent on the simplex.
//   bv:      closed-form regularized least-squares metric correction with
//            bias-variance tradeoff gamma, plus the derived P(R) obtained by
//            differencing corrected Recall curves.
//
// All estimators are deterministic: fixed config + fixed input give
// bit-identical output.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rankdist/conditional_model.hpp"
#include "rankdist/types.hpp"

namespace rankdist {

struct WeightDescriptor {
    enum class Kind { None, APDecay, NDCGDecay };
    Kind kind = Kind::None;
    double scale = 10.0;  // C > 1; slows the decay of w(r) = w_metric(r/C)
};

// w(r) for the weighted likelihood; w == 1 when kind is None.
double decay_weight(const WeightDescriptor& w, int sampled_rank);

struct EmConfig {
    int max_iterations = 1000;
    double tolerance = 1e-8;              // on max |pi_new - pi_old| per iteration
    std::optional<RankPmf> init;          // default: uniform (full support)
    WeightDescriptor weight;

    void validate(int support) const;
};

struct MesConfig {
    double eta = 0.001;                   // entropy weight
    double tolerance = 1e-9;              // relative objective change
    int max_iterations = 50'000;

    void validate() const;
};

struct BvConfig {
    double gamma = 0.1;                   // bias-variance tradeoff, in [0, 1]
    std::optional<RankPmf> prior;         // P(R) used in the system; default uniform

    void validate(int support) const;
};

struct EstimatorReport {
    std::optional<RankPmf> pmf_estimate;
    std::vector<double> objective_trace;  // one entry per iteration performed
    int iterations_used = 0;
    bool converged = false;
    bool repaired = false;                // negative mass clamped + renormalized
};

// Maximum-likelihood fit of the mixture weights via EM, using the grouped
// update over distinct sampled ranks (O(N*n) per iteration). The objective
// trace holds the log-likelihood of each visited iterate.
EstimatorReport mle_em(const SampledRanks& sr, const ConditionalModel& model,
                       const EmConfig& cfg = {});

// Weighted MLE. With weight kind None this degenerates to mle_em exactly
// (identical iterates); the trace holds the weighted log-likelihood.
EstimatorReport wmle_em(const SampledRanks& sr, const ConditionalModel& model,
                        const EmConfig& cfg);

// eta * H(pi) - sum_r pmf~(r) (q(r) - pmf~(r))^2, the quantity mes_optimize
// maximizes; exposed for the optimality checks.
double mes_objective(std::span<const double> pi, const ConditionalModel& model,
                     std::span<const double> sampled_pmf, double eta);

EstimatorReport mes_optimize(const SampledRanks& sr, const ConditionalModel& model,
                             const MesConfig& cfg = {});

struct BvPmfResult {
    RankPmf pmf;
    double mass_before_repair = 0.0;  // telescoped Recall estimate at K = N
    bool repaired = false;
};

// Shares the factorized (1-gamma) A^T A + gamma diag(c) system across metric
// and pmf queries for a fixed model/prior/gamma.
class BvEstimator {
public:
    BvEstimator(const ConditionalModel& model, const BvConfig& cfg = {});

    // sum_r pmf~(r) m^hat(r) for the spec's metric.
    double metric(const RankPmf& sampled_pmf, const MetricSpec& spec) const;

    // P^hat(R) by differencing the corrected Recall curve; negative
    // differences are clamped to zero and the mass renormalized.
    BvPmfResult pmf(const RankPmf& sampled_pmf) const;

    // The corrected per-sampled-rank metric vector m^hat solving
    // ((1-gamma) A^T A + gamma diag(c)) m^hat = A^T b; exposed for the
    // analytic checks.
    std::vector<double> corrected_weights(const MetricSpec& spec) const;

private:
    const ConditionalModel& model_;
    RankPmf prior_;
    double gamma_;
    Matrix a_;                    // N x n, sqrt(P(R)) P(r|R)
    std::vector<double> c_;       // marginal sampled-rank probabilities under the prior
    Matrix chol_;                 // Cholesky factor of the regularized Gram matrix

    std::vector<double> solve(std::span<const double> rhs) const;
};

double bv_metric(const SampledRanks& sr, const ConditionalModel& model, const MetricSpec& spec,
                 const BvConfig& cfg = {});

BvPmfResult bv_pmf(const SampledRanks& sr, const ConditionalModel& model,
                   const BvConfig& cfg = {});

}  // namespace rankdist
