// Experiment orchestration: repeated-sampling estimation tables, winner
// prediction counts, and learned-distribution accuracy curves.
//
// Every repeat derives its sampling seed from (plan seed, algorithm index,
// repeat index), repeats may run on worker threads, and aggregation uses
// pairwise summation over the repeat-indexed results, so outputs are
// byte-identical across reruns of the same plan.
//
// The simulation scheme and the estimators' model scheme are configured
// independently: realistic protocols sample items without replacement while
// the binomial model assumes replacement, and the gap between the two is
// itself worth measuring.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankdist/estimators.hpp"
#include "rankdist/rankfile.hpp"
#include "rankdist/simulate.hpp"
#include "rankdist/types.hpp"

namespace rankdist {

struct EstimatorChoice {
    enum class Kind { Bv, Mle, Wmle, Mes };

    Kind kind = Kind::Mle;
    std::string label = "MLE";
    BvConfig bv;
    EmConfig em;
    MesConfig mes;

    // "bv<gamma>", "mle", "wmle", "mes" (case-insensitive).
    static EstimatorChoice parse(const std::string& name);

    // The standard comparison set: BV 0.1, BV 0.01, MLE, WMLE, MES.
    static std::vector<EstimatorChoice> default_set();
};

struct AlgorithmInput {
    std::string name;
    std::optional<std::filesystem::path> file;   // global rank file
    std::optional<TruthSpec> synthetic;

    RankDataset load() const;
};

struct ExperimentPlan {
    std::vector<AlgorithmInput> algorithms;
    std::vector<EstimatorChoice> estimators = EstimatorChoice::default_set();
    std::vector<MetricKind> metrics = {MetricKind::Recall, MetricKind::NDCG, MetricKind::AP};
    std::vector<int> cutoffs = {10};
    int repeats = 100;
    int pool_size = 100;
    Scheme scheme = Scheme::WithoutReplacement;        // how sampled ranks are drawn
    Scheme model_scheme = Scheme::WithReplacement;     // what the estimators assume
    std::uint64_t seed = 0;
    int max_rank = 200;                                // curve emission range
    std::vector<int> sweep_pool_sizes = {100, 500};
    int threads = 0;                                   // 0 = hardware concurrency

    void validate() const;
};

ExperimentPlan load_plan(const std::filesystem::path& config_path);

// Deterministic per-repeat sampling seed, shared by every algorithm in the
// plan: algorithms are compared on the same sampling draws, so identical rank
// data gives identical estimates.
std::uint64_t repeat_seed(std::uint64_t plan_seed, int repeat);

// Sum in a fixed pairwise tree; independent of how the values were produced.
double pairwise_sum(std::span<const double> values);

struct TableResult {
    std::vector<std::string> estimators;
    struct Row {
        std::string algo;
        std::string metric;
        int k = 0;
        double exact = 0.0;
        std::vector<double> mean;      // per estimator; NaN if every repeat failed
        std::vector<double> stddev;
        std::vector<int> ok_repeats;
    };
    std::vector<Row> rows;
    int repeats = 0;
};

TableResult run_estimation_table(const ExperimentPlan& plan);
void write_table_csv(const std::filesystem::path& path, const TableResult& result);
ReportTable to_report(const TableResult& result);

struct WinnerResult {
    std::vector<std::string> estimators;
    struct Row {
        std::string metric;
        int k = 0;
        std::vector<int> successes;    // per estimator, out of `repeats`
    };
    std::vector<Row> rows;
    int repeats = 0;
};

WinnerResult run_winner_prediction(const ExperimentPlan& plan);
void write_winners_csv(const std::filesystem::path& path, const WinnerResult& result);

struct DistributionCurves {
    std::string algo;
    int pool_size = 0;
    int max_rank = 0;
    std::vector<std::string> estimators;
    std::vector<double> true_pmf;                 // ranks 1..max_rank
    std::vector<double> true_cdf;
    std::vector<std::vector<double>> est_pmf;     // [estimator][rank-1], repeat-averaged
    std::vector<std::vector<double>> est_cdf;
};

std::vector<DistributionCurves> run_distribution_accuracy(const ExperimentPlan& plan);

// run_distribution_accuracy at each pool size in sweep_pool_sizes.
std::vector<DistributionCurves> run_sample_size_sweep(const ExperimentPlan& plan);

void write_curves_csv(const std::filesystem::path& path, const DistributionCurves& curves);

// Minimal static line chart of the CDF curves (true + estimators).
void write_curves_svg(const std::filesystem::path& path, const DistributionCurves& curves);

}  // namespace rankdist
