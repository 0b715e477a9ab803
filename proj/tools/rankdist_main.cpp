// rankdist: learn empirical rank distributions from sampled ranking results
// and estimate top-K recommendation metrics from them.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankdist/estimators.hpp"
#include "rankdist/harness.hpp"
#include "rankdist/kernels.hpp"
#include "rankdist/metrics.hpp"
#include "rankdist/rankfile.hpp"
#include "rankdist/simulate.hpp"

namespace fs = std::filesystem;
using namespace rankdist;

namespace {

struct PlanOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> repeats;
    std::optional<int> pool_size;
    std::vector<int> cutoffs;
    std::vector<std::string> estimators;
    std::string out_dir = "out";
    std::optional<int> threads;
};

void add_plan_options(CLI::App* cmd, PlanOptions& opt) {
    cmd->add_option("--config", opt.config, "experiment config (JSON)")->required();
    cmd->add_option("--seed", opt.seed, "override the plan seed");
    cmd->add_option("--repeats", opt.repeats, "override the repeat count");
    cmd->add_option("--n", opt.pool_size, "override the sample pool size");
    cmd->add_option("--k", opt.cutoffs, "override the cutoff list")->delimiter(',');
    cmd->add_option("--estimators", opt.estimators,
                    "override the estimator list (bv<gamma>|mle|wmle|mes)")
        ->delimiter(',');
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
}

ExperimentPlan resolve_plan(const PlanOptions& opt) {
    ExperimentPlan plan = load_plan(opt.config);
    if (opt.seed) plan.seed = *opt.seed;
    if (opt.repeats) plan.repeats = *opt.repeats;
    if (opt.pool_size) plan.pool_size = *opt.pool_size;
    if (!opt.cutoffs.empty()) plan.cutoffs = opt.cutoffs;
    if (!opt.estimators.empty()) {
        plan.estimators.clear();
        for (const std::string& name : opt.estimators)
            plan.estimators.push_back(EstimatorChoice::parse(name));
    }
    if (opt.threads) plan.threads = *opt.threads;
    plan.validate();
    return plan;
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::string curves_file_stem(const DistributionCurves& curves) {
    return "distaccuracy_" + curves.algo + "_n" + std::to_string(curves.pool_size);
}

int cmd_simulate(const std::string& family, double param, int num_items, int num_users,
                 std::uint64_t seed, const std::string& algo, const std::string& dataset,
                 const std::string& out, int sample_n, const std::string& scheme,
                 const std::string& sample_out) {
    TruthSpec spec;
    spec.num_items = num_items;
    spec.num_users = num_users;
    spec.seed = seed;
    spec.param = param;
    if (family == "uniform") spec.family = TruthSpec::Family::Uniform;
    else if (family == "zipf") spec.family = TruthSpec::Family::Zipf;
    else if (family == "geometric") spec.family = TruthSpec::Family::Geometric;
    else throw domain_error("unknown family '" + family + "'");

    const RankDataset truth = generate_truth(spec);
    RankFileMeta meta{algo, dataset};
    write_rank_file(out, truth, meta);
    std::cout << "wrote " << out << " (" << truth.num_users() << " users, N="
              << truth.num_items << ")\n";

    if (sample_n > 0) {
        const Scheme sch = scheme == "wr" ? Scheme::WithReplacement : Scheme::WithoutReplacement;
        const SampledRanks sr = sample_ranks(truth, sample_n, sch, seed);
        const std::string path = sample_out.empty() ? out + ".sampled" : sample_out;
        write_rank_file(path, sr, meta);
        std::cout << "wrote " << path << " (n=" << sample_n << ", scheme=" << scheme << ")\n";
    }
    return 0;
}

int cmd_estimate(const std::string& input, const std::vector<std::string>& estimator_names,
                 const std::vector<std::string>& metric_names, const std::vector<int>& cutoffs,
                 const std::string& model_scheme, const std::string& out_dir) {
    const LoadedRanks loaded = read_rank_file(input);
    const SampledRanks& sr = loaded.sampled();

    std::vector<EstimatorChoice> estimators;
    for (const std::string& name : estimator_names)
        estimators.push_back(EstimatorChoice::parse(name));

    std::vector<MetricKind> metrics;
    for (const std::string& name : metric_names) {
        if (name == "recall") metrics.push_back(MetricKind::Recall);
        else if (name == "precision") metrics.push_back(MetricKind::Precision);
        else if (name == "ndcg") metrics.push_back(MetricKind::NDCG);
        else if (name == "ap") metrics.push_back(MetricKind::AP);
        else if (name == "auc") metrics.push_back(MetricKind::AUC);
        else throw domain_error("unknown metric '" + name + "'");
    }

    const Scheme sch =
        model_scheme == "wor" ? Scheme::WithoutReplacement : Scheme::WithReplacement;
    const ConditionalModel model(sr.num_items, sr.pool_size, sch);
    const RankPmf sampled = empirical_pmf(sr.ranks, sr.pool_size);

    const fs::path dir = ensure_out_dir(out_dir);
    ReportTable report;
    std::vector<std::pair<std::string, RankPmf>> learned;

    for (const EstimatorChoice& choice : estimators) {
        RankPmf pmf = RankPmf::uniform(sr.num_items);
        if (choice.kind == EstimatorChoice::Kind::Bv) {
            const BvEstimator bv(model, choice.bv);
            for (const MetricKind metric : metrics) {
                for (const int k : cutoffs) {
                    ReportRow row{loaded.meta.algo, to_string(metric), k, choice.label,
                                  bv.metric(sampled, MetricSpec(metric, k)), 0.0, 1};
                    report.push_back(std::move(row));
                }
            }
            const BvPmfResult res = bv.pmf(sampled);
            pmf = res.pmf;
            std::cout << choice.label << ": closed form"
                      << (res.repaired ? " (negative mass clamped)" : "") << "\n";
        } else {
            EstimatorReport est;
            if (choice.kind == EstimatorChoice::Kind::Mle) est = mle_em(sr, model, choice.em);
            else if (choice.kind == EstimatorChoice::Kind::Wmle) est = wmle_em(sr, model, choice.em);
            else est = mes_optimize(sr, model, choice.mes);
            pmf = *est.pmf_estimate;
            std::cout << choice.label << ": " << est.iterations_used << " iterations, "
                      << (est.converged ? "converged" : "not converged") << "\n";
            for (const MetricKind metric : metrics) {
                for (const int k : cutoffs) {
                    ReportRow row{loaded.meta.algo, to_string(metric), k, choice.label,
                                  metric_from_pmf(pmf, MetricSpec(metric, k)), 0.0, 1};
                    report.push_back(std::move(row));
                }
            }
        }
        learned.emplace_back(choice.label, std::move(pmf));
    }

    // naive sampled metric for comparison, where the cutoff fits the pool
    for (const MetricKind metric : metrics)
        for (const int k : cutoffs)
            if (k <= sr.pool_size)
                report.push_back(ReportRow{loaded.meta.algo, to_string(metric), k, "Sampled",
                                           sampled_metric(sr, MetricSpec(metric, k)), 0.0, 1});

    write_report_csv(dir / "estimates.csv", report);

    std::ofstream pmf_out(dir / "pmf.csv");
    pmf_out << "R";
    for (const auto& [label, pmf] : learned) pmf_out << ',' << label << "_pmf," << label << "_cdf";
    pmf_out << "\n";
    std::vector<double> cdf(learned.size(), 0.0);
    for (int r = 1; r <= sr.num_items; ++r) {
        pmf_out << r;
        for (std::size_t e = 0; e < learned.size(); ++e) {
            cdf[e] += learned[e].second.at_rank(r);
            char buf[64];
            std::snprintf(buf, sizeof(buf), ",%.10g,%.10g", learned[e].second.at_rank(r), cdf[e]);
            pmf_out << buf;
        }
        pmf_out << "\n";
    }
    std::cout << "wrote " << (dir / "estimates.csv").string() << " and "
              << (dir / "pmf.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rankdist: top-K metric estimation from sampled ranking results"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a synthetic global rank file");
    std::string sim_family = "zipf", sim_algo = "synthetic", sim_dataset = "synthetic";
    std::string sim_out = "truth.ranks", sim_scheme = "wor", sim_sample_out;
    double sim_param = 1.2;
    int sim_items = 1000, sim_users = 10000, sim_sample_n = 0;
    std::uint64_t sim_seed = 0;
    sim->add_option("--family", sim_family, "uniform|zipf|geometric")
        ->check(CLI::IsMember({"uniform", "zipf", "geometric"}));
    sim->add_option("--param", sim_param, "Zipf exponent or geometric p");
    sim->add_option("--num-items", sim_items, "catalog size N")->required();
    sim->add_option("--num-users", sim_users, "user count M")->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--algo", sim_algo, "algorithm label");
    sim->add_option("--dataset", sim_dataset, "dataset label");
    sim->add_option("--out", sim_out, "output rank file");
    sim->add_option("--sample-n", sim_sample_n, "also emit a sampled rank file with this pool size");
    sim->add_option("--scheme", sim_scheme, "sampling scheme for --sample-n")
        ->check(CLI::IsMember({"wr", "wor"}));
    sim->add_option("--sample-out", sim_sample_out, "sampled rank file path");

    // estimate
    auto* est = app.add_subcommand("estimate", "run estimators on one sampled rank file");
    std::string est_input, est_model_scheme = "wr", est_out_dir = "out";
    std::vector<std::string> est_estimators = {"bv0.1", "bv0.01", "mle", "wmle", "mes"};
    std::vector<std::string> est_metrics = {"recall", "ndcg", "ap"};
    std::vector<int> est_k = {10};
    est->add_option("--input", est_input, "sampled rank file")->required();
    est->add_option("--estimators", est_estimators, "estimators to run")->delimiter(',');
    est->add_option("--metrics", est_metrics, "metrics to price")->delimiter(',');
    est->add_option("--k", est_k, "cutoffs")->delimiter(',');
    est->add_option("--model-scheme", est_model_scheme, "conditional model scheme")
        ->check(CLI::IsMember({"wr", "wor"}));
    est->add_option("--out-dir", est_out_dir, "output directory");

    // plan-driven subcommands
    PlanOptions table_opt, winners_opt, dist_opt, sweep_opt;
    auto* table = app.add_subcommand("table", "repeated-sampling estimation table (mean +- std)");
    add_plan_options(table, table_opt);
    auto* winners = app.add_subcommand("winners", "winner-prediction success counts");
    add_plan_options(winners, winners_opt);
    auto* dist = app.add_subcommand("distaccuracy", "learned-distribution accuracy curves");
    add_plan_options(dist, dist_opt);
    bool dist_svg = false, sweep_svg = false;
    dist->add_flag("--svg", dist_svg, "also render CDF charts as SVG");
    auto* sweep = app.add_subcommand("sweep", "distribution accuracy across pool sizes");
    add_plan_options(sweep, sweep_opt);
    sweep->add_flag("--svg", sweep_svg, "also render CDF charts as SVG");

    bool show_backend = false;
    app.add_flag("--backend", show_backend, "print the selected kernel backend");

    CLI11_PARSE(app, argc, argv);

    try {
        if (show_backend) std::cerr << "kernel backend: " << kern::backend_name() << "\n";

        if (sim->parsed())
            return cmd_simulate(sim_family, sim_param, sim_items, sim_users, sim_seed, sim_algo,
                                sim_dataset, sim_out, sim_sample_n, sim_scheme, sim_sample_out);

        if (est->parsed())
            return cmd_estimate(est_input, est_estimators, est_metrics, est_k, est_model_scheme,
                                est_out_dir);

        if (table->parsed()) {
            const ExperimentPlan plan = resolve_plan(table_opt);
            const TableResult result = run_estimation_table(plan);
            const fs::path dir = ensure_out_dir(table_opt.out_dir);
            write_table_csv(dir / "table.csv", result);
            write_report_csv(dir / "report.csv", to_report(result));
            std::cout << "wrote " << (dir / "table.csv").string() << " and "
                      << (dir / "report.csv").string() << "\n";
            return 0;
        }

        if (winners->parsed()) {
            const ExperimentPlan plan = resolve_plan(winners_opt);
            const WinnerResult result = run_winner_prediction(plan);
            const fs::path dir = ensure_out_dir(winners_opt.out_dir);
            write_winners_csv(dir / "winners.csv", result);
            std::cout << "wrote " << (dir / "winners.csv").string() << "\n";
            return 0;
        }

        if (dist->parsed() || sweep->parsed()) {
            const PlanOptions& opt = dist->parsed() ? dist_opt : sweep_opt;
            const bool svg = dist->parsed() ? dist_svg : sweep_svg;
            const ExperimentPlan plan = resolve_plan(opt);
            const std::vector<DistributionCurves> all =
                dist->parsed() ? run_distribution_accuracy(plan) : run_sample_size_sweep(plan);
            const fs::path dir = ensure_out_dir(opt.out_dir);
            for (const DistributionCurves& curves : all) {
                write_curves_csv(dir / (curves_file_stem(curves) + ".csv"), curves);
                if (svg) write_curves_svg(dir / (curves_file_stem(curves) + ".svg"), curves);
                std::cout << "wrote " << (dir / (curves_file_stem(curves) + ".csv")).string()
                          << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        const char* type = "error";
        if (dynamic_cast<const domain_error*>(&e)) type = "domain_error";
        else if (dynamic_cast<const parse_error*>(&e)) type = "parse_error";
        else if (dynamic_cast<const solver_error*>(&e)) type = "solver_error";
        nlohmann::json err{{"error", {{"type", type}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
