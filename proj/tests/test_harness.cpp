#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rankdist/harness.hpp"
#include "rankdist/metrics.hpp"
#include "test_util.hpp"

using namespace rankdist;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "rankdist_test_harness";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AlgorithmInput synthetic_algo(const std::string& name, TruthSpec::Family family, double param,
                              int n_items, int n_users, std::uint64_t seed) {
    AlgorithmInput input;
    input.name = name;
    TruthSpec spec;
    spec.num_items = n_items;
    spec.num_users = n_users;
    spec.family = family;
    spec.param = param;
    spec.seed = seed;
    input.synthetic = spec;
    return input;
}

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.algorithms = {synthetic_algo("alpha", TruthSpec::Family::Zipf, 1.2, 300, 1500, 1),
                       synthetic_algo("beta", TruthSpec::Family::Zipf, 0.8, 300, 1500, 2),
                       synthetic_algo("gamma", TruthSpec::Family::Uniform, 0.0, 300, 1500, 3)};
    plan.cutoffs = {10};
    plan.repeats = 8;
    plan.pool_size = 30;
    plan.seed = 99;
    plan.scheme = Scheme::WithReplacement;
    return plan;
}

void pairwise_sum_matches_naive() {
    SplitMix64 rng(77);
    for (const std::size_t len : {0u, 1u, 7u, 8u, 9u, 100u, 1023u}) {
        std::vector<double> v(len);
        long double naive = 0.0L;
        for (double& x : v) {
            x = rng.next_double() - 0.5;
            naive += x;
        }
        CHECK_CLOSE(pairwise_sum(v), static_cast<double>(naive), 1e-12 * (1.0 + len));
    }
}

void estimator_parsing() {
    const EstimatorChoice bv = EstimatorChoice::parse("bv0.01");
    CHECK(bv.kind == EstimatorChoice::Kind::Bv);
    CHECK_CLOSE(bv.bv.gamma, 0.01, 1e-15);
    CHECK(bv.label == "BV 0.01");

    const EstimatorChoice wmle = EstimatorChoice::parse("WMLE");
    CHECK(wmle.kind == EstimatorChoice::Kind::Wmle);
    CHECK(wmle.em.weight.kind == WeightDescriptor::Kind::NDCGDecay);
    CHECK_CLOSE(wmle.em.weight.scale, 10.0, 0.0);

    CHECK_THROWS(EstimatorChoice::parse("bvx"), domain_error);
    CHECK_THROWS(EstimatorChoice::parse("nonsense"), domain_error);

    const auto defaults = EstimatorChoice::default_set();
    CHECK(defaults.size() == 5);
    CHECK(defaults[0].label == "BV 0.1");
    CHECK(defaults[1].label == "BV 0.01");
    CHECK(defaults[2].label == "MLE");
    CHECK(defaults[3].label == "WMLE");
    CHECK(defaults[4].label == "MES");
}

void point_mass_truth_recovers_exactly() {
    ExperimentPlan plan;
    AlgorithmInput algo;
    algo.name = "point";
    TruthSpec spec;
    spec.num_items = 50;
    spec.num_users = 200;
    spec.family = TruthSpec::Family::Custom;
    spec.custom = RankPmf::point_mass(1, 50);
    algo.synthetic = spec;
    plan.algorithms = {algo};
    plan.cutoffs = {10};
    plan.metrics = {MetricKind::Recall};
    plan.repeats = 5;
    plan.pool_size = 10;
    plan.scheme = Scheme::WithReplacement;

    const TableResult result = run_estimation_table(plan);
    CHECK(result.rows.size() == 1);
    const TableResult::Row& row = result.rows.front();
    CHECK_CLOSE(row.exact, 1.0, 0.0);
    // Every repeat sees the identical point-mass sample, so all estimators are
    // exactly repeatable (std 0). The distribution-learning estimators recover
    // the point mass and price Recall@10 at 1; the unconstrained BV solution
    // prices it at its corrected weight m_hat(1), which is not 1 by design.
    for (std::size_t e = 0; e < result.estimators.size(); ++e) {
        CHECK_CLOSE(row.stddev[e], 0.0, 1e-12);
        CHECK(row.ok_repeats[e] == plan.repeats);
        if (result.estimators[e].rfind("BV", 0) != 0) CHECK_CLOSE(row.mean[e], 1.0, 1e-6);
    }
    const ConditionalModel model(50, 10, Scheme::WithReplacement);
    for (const double gamma : {0.1, 0.01}) {
        BvConfig cfg;
        cfg.gamma = gamma;
        const BvEstimator bv(model, cfg);
        const double m1 = bv.corrected_weights(MetricSpec(MetricKind::Recall, 10))[0];
        const std::size_t e = gamma == 0.1 ? 0 : 1;
        CHECK_CLOSE(row.mean[e], m1, 1e-12);
    }
}

void exact_column_is_seed_independent() {
    ExperimentPlan plan = small_plan();
    plan.repeats = 2;
    const TableResult a = run_estimation_table(plan);
    plan.seed = 123456;
    const TableResult b = run_estimation_table(plan);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].exact == b.rows[i].exact);
    // and equals the direct metric of the truth data
    const RankDataset truth = plan.algorithms[0].load();
    CHECK_CLOSE(a.rows[0].exact, exact_metric(truth, {MetricKind::Recall, 10}), 0.0);
}

void outputs_are_byte_identical_across_reruns() {
    const ExperimentPlan plan = small_plan();

    const fs::path first = temp_dir() / "run1";
    const fs::path second = temp_dir() / "run2";
    fs::create_directories(first);
    fs::create_directories(second);

    const TableResult t1 = run_estimation_table(plan);
    const TableResult t2 = run_estimation_table(plan);
    write_table_csv(first / "table.csv", t1);
    write_table_csv(second / "table.csv", t2);
    write_report_csv(first / "report.csv", to_report(t1));
    write_report_csv(second / "report.csv", to_report(t2));
    CHECK(slurp(first / "table.csv") == slurp(second / "table.csv"));
    CHECK(slurp(first / "report.csv") == slurp(second / "report.csv"));
    CHECK(!slurp(first / "table.csv").empty());

    const WinnerResult w1 = run_winner_prediction(plan);
    const WinnerResult w2 = run_winner_prediction(plan);
    write_winners_csv(first / "winners.csv", w1);
    write_winners_csv(second / "winners.csv", w2);
    CHECK(slurp(first / "winners.csv") == slurp(second / "winners.csv"));

    // threads must not change results either
    ExperimentPlan threaded = plan;
    threaded.threads = 4;
    const TableResult t3 = run_estimation_table(threaded);
    write_table_csv(second / "table_threaded.csv", t3);
    CHECK(slurp(first / "table.csv") == slurp(second / "table_threaded.csv"));
}

void winners_identical_algorithms_tie_to_first() {
    ExperimentPlan plan;
    plan.algorithms = {synthetic_algo("same1", TruthSpec::Family::Zipf, 1.0, 200, 800, 5),
                       synthetic_algo("same2", TruthSpec::Family::Zipf, 1.0, 200, 800, 5)};
    plan.cutoffs = {10};
    plan.metrics = {MetricKind::Recall};
    plan.repeats = 6;
    plan.pool_size = 20;
    plan.scheme = Scheme::WithReplacement;
    plan.seed = 11;

    // identical truth data, and sampling draws are shared across algorithms:
    // every estimate ties exactly, so lowest-index tie-breaking marks every
    // repeat a success
    const WinnerResult result = run_winner_prediction(plan);
    CHECK(result.rows.size() == 1);
    for (const auto& row : result.rows)
        for (const int s : row.successes) CHECK(s == plan.repeats);
}

void winners_separated_algorithms_always_right() {
    ExperimentPlan plan;
    AlgorithmInput best;
    best.name = "best";
    TruthSpec spec;
    spec.num_items = 100;
    spec.num_users = 500;
    spec.family = TruthSpec::Family::Custom;
    spec.custom = RankPmf::point_mass(1, 100);
    best.synthetic = spec;

    AlgorithmInput worst;
    worst.name = "worst";
    spec.custom = RankPmf::point_mass(100, 100);
    worst.synthetic = spec;

    plan.algorithms = {worst, best};  // best deliberately NOT first
    plan.cutoffs = {5, 10};
    plan.metrics = {MetricKind::Recall, MetricKind::NDCG};
    plan.repeats = 10;
    plan.pool_size = 10;
    plan.scheme = Scheme::WithReplacement;

    const WinnerResult result = run_winner_prediction(plan);
    for (const auto& row : result.rows)
        for (const int s : row.successes) CHECK(s == plan.repeats);
}

// With exact Recall@10 gaps of ~0.34 between algorithms (0.83 / 0.49 / 0.12),
// the separation dwarfs every estimator's repeat noise at n=100, M=1e4, so
// every estimator picks the winner in every repeat.
void winners_with_wide_separation() {
    ExperimentPlan plan;
    plan.algorithms = {synthetic_algo("strong", TruthSpec::Family::Zipf, 1.6, 1000, 10'000, 41),
                       synthetic_algo("medium", TruthSpec::Family::Zipf, 1.1, 1000, 10'000, 42),
                       synthetic_algo("weak", TruthSpec::Family::Zipf, 0.6, 1000, 10'000, 43)};
    plan.metrics = {MetricKind::Recall};
    plan.cutoffs = {10};
    plan.repeats = 12;
    plan.pool_size = 100;
    plan.scheme = Scheme::WithReplacement;
    plan.seed = 505;

    const double strong = exact_metric(plan.algorithms[0].load(), {MetricKind::Recall, 10});
    const double medium = exact_metric(plan.algorithms[1].load(), {MetricKind::Recall, 10});
    const double weak = exact_metric(plan.algorithms[2].load(), {MetricKind::Recall, 10});
    CHECK(strong - medium >= 0.1);
    CHECK(medium - weak >= 0.1);

    const WinnerResult result = run_winner_prediction(plan);
    for (const auto& row : result.rows)
        for (const int s : row.successes) CHECK(s == plan.repeats);
}

void distribution_curves_consistency() {
    ExperimentPlan plan = small_plan();
    plan.algorithms = {plan.algorithms[0]};
    plan.repeats = 5;
    plan.max_rank = 60;

    const std::vector<DistributionCurves> curves = run_distribution_accuracy(plan);
    CHECK(curves.size() == 1);
    const DistributionCurves& c = curves.front();
    CHECK(c.max_rank == 60);

    // true pmf emitted equals the empirical pmf of the truth data
    const RankDataset truth = plan.algorithms[0].load();
    const RankPmf expected = empirical_pmf(truth.ranks, truth.num_items);
    for (int r = 1; r <= c.max_rank; ++r)
        CHECK(c.true_pmf[static_cast<std::size_t>(r - 1)] == expected.at_rank(r));

    // CDF columns are non-decreasing for every estimator
    for (const auto& cdf : c.est_cdf) {
        for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i] >= cdf[i - 1] - 1e-15);
        CHECK(cdf.back() <= 1.0 + 1e-9);
    }

    const fs::path path = temp_dir() / "curves.csv";
    write_curves_csv(path, c);
    const std::string text = slurp(path);
    CHECK(text.find("R,true_pmf,true_cdf") == 0);
    CHECK(text.find("MLE_pmf") != std::string::npos);

    const fs::path svg = temp_dir() / "curves.svg";
    write_curves_svg(svg, c);
    CHECK(slurp(svg).find("<svg") == 0);
}

void sweep_produces_all_pool_sizes() {
    ExperimentPlan plan = small_plan();
    plan.algorithms = {plan.algorithms[0]};
    plan.repeats = 3;
    plan.max_rank = 40;
    plan.sweep_pool_sizes = {20, 60};
    plan.estimators = {EstimatorChoice::parse("mle")};

    const std::vector<DistributionCurves> curves = run_sample_size_sweep(plan);
    CHECK(curves.size() == 2);
    CHECK(curves[0].pool_size == 20);
    CHECK(curves[1].pool_size == 60);
}

void failed_cells_render_as_failed() {
    TableResult result;
    result.repeats = 3;
    result.estimators = {"MLE"};
    TableResult::Row row;
    row.algo = "a";
    row.metric = "Recall";
    row.k = 10;
    row.exact = 0.5;
    row.mean = {std::numeric_limits<double>::quiet_NaN()};
    row.stddev = {std::numeric_limits<double>::quiet_NaN()};
    row.ok_repeats = {0};
    result.rows.push_back(row);

    const fs::path path = temp_dir() / "failed.csv";
    write_table_csv(path, result);
    CHECK(slurp(path).find("failed") != std::string::npos);
}

void config_loading() {
    const fs::path dir = temp_dir();
    const fs::path cfg_path = dir / "plan.json";
    std::ofstream cfg(cfg_path);
    cfg << R"({
      "algorithms": [
        {"name": "zipfy", "family": "zipf", "param": 1.2, "num_items": 400, "num_users": 1000, "seed": 7}
      ],
      "estimators": ["bv0.1", "mle"],
      "metrics": ["recall", "ap"],
      "k": [1, 10],
      "repeats": 4,
      "n": 25,
      "scheme": "wor",
      "model_scheme": "wr",
      "seed": 99,
      "max_rank": 123
    })";
    cfg.close();

    const ExperimentPlan plan = load_plan(cfg_path);
    CHECK(plan.algorithms.size() == 1);
    CHECK(plan.estimators.size() == 2);
    CHECK(plan.metrics.size() == 2);
    CHECK(plan.cutoffs == std::vector<int>({1, 10}));
    CHECK(plan.repeats == 4);
    CHECK(plan.pool_size == 25);
    CHECK(plan.scheme == Scheme::WithoutReplacement);
    CHECK(plan.model_scheme == Scheme::WithReplacement);
    CHECK(plan.seed == 99);
    CHECK(plan.max_rank == 123);

    const TableResult result = run_estimation_table(plan);
    CHECK(result.rows.size() == 4);  // 2 metrics x 2 cutoffs

    std::ofstream bad(cfg_path);
    bad << "{ not json";
    bad.close();
    CHECK_THROWS(load_plan(cfg_path), parse_error);
}

// The paper's qualitative finding at desk scale: the MLE's repeat-averaged
// Recall@10 sits closer to the exact value than BV 0.1's. Checked as a trend
// over independent plan-level reruns; threshold established empirically with
// this same pipeline before freezing.
void mle_beats_bv_bias_trend() {
    int mle_closer = 0;
    const int reruns = 20;
    for (int run = 0; run < reruns; ++run) {
        ExperimentPlan plan;
        plan.algorithms = {
            synthetic_algo("zipf12", TruthSpec::Family::Zipf, 1.2, 1000, 10'000,
                           500 + static_cast<std::uint64_t>(run))};
        plan.estimators = {EstimatorChoice::parse("mle"), EstimatorChoice::parse("bv0.1")};
        plan.metrics = {MetricKind::Recall};
        plan.cutoffs = {10};
        plan.repeats = 10;
        plan.pool_size = 100;
        plan.scheme = Scheme::WithReplacement;
        plan.seed = 7000 + static_cast<std::uint64_t>(run);

        const TableResult result = run_estimation_table(plan);
        const TableResult::Row& row = result.rows.front();
        const double mle_bias = std::fabs(row.mean[0] - row.exact);
        const double bv_bias = std::fabs(row.mean[1] - row.exact);
        if (mle_bias < bv_bias) ++mle_closer;
    }
    CHECK(mle_closer >= (reruns * 70) / 100);
}

}  // namespace

int main() {
    pairwise_sum_matches_naive();
    estimator_parsing();
    point_mass_truth_recovers_exactly();
    exact_column_is_seed_independent();
    outputs_are_byte_identical_across_reruns();
    winners_identical_algorithms_tie_to_first();
    winners_separated_algorithms_always_right();
    winners_with_wide_separation();
    distribution_curves_consistency();
    sweep_produces_all_pool_sizes();
    failed_cells_render_as_failed();
    config_loading();
    mle_beats_bv_bias_trend();
    return testutil::summary("test_harness");
}
