#include "rankdist/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <thread>

#include <json.hpp>

#include "rankdist/kernels.hpp"
#include "rankdist/metrics.hpp"

namespace rankdist {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

MetricKind parse_metric(const std::string& name) {
    const std::string m = to_lower(name);
    if (m == "recall") return MetricKind::Recall;
    if (m == "precision") return MetricKind::Precision;
    if (m == "ndcg") return MetricKind::NDCG;
    if (m == "ap") return MetricKind::AP;
    if (m == "auc") return MetricKind::AUC;
    throw domain_error("unknown metric '" + name + "'");
}

Scheme parse_scheme(const std::string& name) {
    const std::string s = to_lower(name);
    if (s == "wr") return Scheme::WithReplacement;
    if (s == "wor") return Scheme::WithoutReplacement;
    throw domain_error("unknown scheme '" + name + "' (expected wr or wor)");
}

TruthSpec::Family parse_family(const std::string& name) {
    const std::string f = to_lower(name);
    if (f == "uniform") return TruthSpec::Family::Uniform;
    if (f == "zipf") return TruthSpec::Family::Zipf;
    if (f == "geometric") return TruthSpec::Family::Geometric;
    throw domain_error("unknown truth family '" + name + "'");
}

std::string format_gamma(double gamma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", gamma);
    return buf;
}

// Runs every repeat of a plan and returns the raw per-repeat metric estimates,
// indexed [algorithm][repeat][estimator][cell] with cell = metric-major, K-minor.
struct SampleRuns {
    struct PerAlgorithm {
        std::string name;
        std::vector<double> exact;                          // per cell
        std::vector<std::vector<std::vector<double>>> values;  // [repeat][estimator][cell]
    };
    std::vector<PerAlgorithm> algos;
    std::size_t cell_count = 0;
};

void parallel_over_repeats(int repeats, int threads, const std::function<void(int)>& body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, repeats);
    if (workers == 1) {
        for (int rep = 0; rep < repeats; ++rep) body(rep);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int rep = w; rep < repeats; rep += workers) body(rep);
        });
    }
    for (std::thread& t : pool) t.join();
}

// Per-repeat estimates for every estimator and (metric, K) cell. The pmf-based
// estimators run once per repeat and price all cells from the learned
// distribution; the BV estimator prices each cell against its precomputed
// corrected-weight vector.
class AlgorithmRunner {
public:
    AlgorithmRunner(const ExperimentPlan& plan, const RankDataset& truth)
        : plan_(plan),
          truth_(truth),
          model_(truth.num_items, plan.pool_size, plan.model_scheme) {
        for (const EstimatorChoice& choice : plan.estimators) {
            if (choice.kind == EstimatorChoice::Kind::Bv)
                bv_.emplace_back(std::make_unique<BvEstimator>(model_, choice.bv));
            else
                bv_.emplace_back(nullptr);
        }
        for (std::size_t e = 0; e < plan.estimators.size(); ++e) {
            if (!bv_[e]) continue;
            for (const MetricKind metric : plan.metrics)
                for (const int k : plan.cutoffs)
                    bv_weights_[cell_key(e, metric, k)] =
                        bv_[e]->corrected_weights(MetricSpec(metric, k));
        }
    }

    const ConditionalModel& model() const { return model_; }

    std::vector<double> exact_cells() const {
        std::vector<double> cells;
        for (const MetricKind metric : plan_.metrics)
            for (const int k : plan_.cutoffs)
                cells.push_back(exact_metric(truth_, MetricSpec(metric, k)));
        return cells;
    }

    // [estimator][cell]; NaN marks a failed cell, the repeat keeps running.
    std::vector<std::vector<double>> run_repeat(const SampledRanks& sr) const {
        const RankPmf sampled = empirical_pmf(sr.ranks, sr.pool_size);
        const std::size_t cells = plan_.metrics.size() * plan_.cutoffs.size();
        std::vector<std::vector<double>> out(plan_.estimators.size(),
                                             std::vector<double>(cells, kNaN));
        for (std::size_t e = 0; e < plan_.estimators.size(); ++e) {
            const EstimatorChoice& choice = plan_.estimators[e];
            if (choice.kind == EstimatorChoice::Kind::Bv) {
                std::size_t cell = 0;
                for (const MetricKind metric : plan_.metrics) {
                    for (const int k : plan_.cutoffs) {
                        try {
                            const auto& m_hat = bv_weights_.at(cell_key(e, metric, k));
                            out[e][cell] = kern::dot(sampled.mass().data(), m_hat.data(),
                                                     m_hat.size());
                        } catch (const std::exception&) {
                            // cell stays NaN
                        }
                        ++cell;
                    }
                }
                continue;
            }
            try {
                const RankPmf pmf = learn_pmf(e, sr);
                std::size_t cell = 0;
                for (const MetricKind metric : plan_.metrics)
                    for (const int k : plan_.cutoffs)
                        out[e][cell++] = metric_from_pmf(pmf, MetricSpec(metric, k));
            } catch (const std::exception&) {
                // all cells of this estimator stay NaN for this repeat
            }
        }
        return out;
    }

    RankPmf learn_pmf(std::size_t estimator_index, const SampledRanks& sr) const {
        const EstimatorChoice& choice = plan_.estimators.at(estimator_index);
        switch (choice.kind) {
            case EstimatorChoice::Kind::Mle:
                return *mle_em(sr, model_, choice.em).pmf_estimate;
            case EstimatorChoice::Kind::Wmle:
                return *wmle_em(sr, model_, choice.em).pmf_estimate;
            case EstimatorChoice::Kind::Mes:
                return *mes_optimize(sr, model_, choice.mes).pmf_estimate;
            case EstimatorChoice::Kind::Bv:
                return bv_[estimator_index]->pmf(empirical_pmf(sr.ranks, sr.pool_size)).pmf;
        }
        throw domain_error("unknown estimator kind");
    }

private:
    static std::uint64_t cell_key(std::size_t estimator, MetricKind metric, int k) {
        return (static_cast<std::uint64_t>(estimator) << 40) ^
               (static_cast<std::uint64_t>(metric) << 32) ^ static_cast<std::uint64_t>(k);
    }

    const ExperimentPlan& plan_;
    const RankDataset& truth_;
    ConditionalModel model_;
    std::vector<std::unique_ptr<BvEstimator>> bv_;
    std::map<std::uint64_t, std::vector<double>> bv_weights_;
};

SampleRuns run_samples(const ExperimentPlan& plan) {
    plan.validate();
    SampleRuns runs;
    runs.cell_count = plan.metrics.size() * plan.cutoffs.size();

    for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
        const RankDataset truth = plan.algorithms[a].load();
        if (plan.pool_size > truth.num_items)
            throw domain_error("plan pool size " + std::to_string(plan.pool_size) +
                               " exceeds catalog size of algorithm '" +
                               plan.algorithms[a].name + "'");
        const AlgorithmRunner runner(plan, truth);

        SampleRuns::PerAlgorithm result;
        result.name = plan.algorithms[a].name;
        result.exact = runner.exact_cells();
        result.values.resize(static_cast<std::size_t>(plan.repeats));

        parallel_over_repeats(plan.repeats, plan.threads, [&](int rep) {
            const SampledRanks sr = sample_ranks(truth, plan.pool_size, plan.scheme,
                                                 repeat_seed(plan.seed, rep));
            result.values[static_cast<std::size_t>(rep)] = runner.run_repeat(sr);
        });
        runs.algos.push_back(std::move(result));
    }
    return runs;
}

struct MeanStd {
    double mean = kNaN;
    double stddev = kNaN;
    int count = 0;
};

MeanStd aggregate(std::span<const double> values) {
    std::vector<double> ok;
    ok.reserve(values.size());
    for (double v : values)
        if (!std::isnan(v)) ok.push_back(v);
    MeanStd out;
    out.count = static_cast<int>(ok.size());
    if (ok.empty()) return out;
    out.mean = pairwise_sum(ok) / out.count;
    if (ok.size() == 1) {
        out.stddev = 0.0;
        return out;
    }
    std::vector<double> sq(ok.size());
    for (std::size_t i = 0; i < ok.size(); ++i) {
        const double d = ok[i] - out.mean;
        sq[i] = d * d;
    }
    out.stddev = std::sqrt(pairwise_sum(sq) / (out.count - 1));
    return out;
}

std::string format_cell(double mean, double stddev) {
    if (std::isnan(mean)) return "failed";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f+-%.4f", mean, stddev);
    return buf;
}

// Strictly-greater comparison keeps the lowest index on ties; NaN never wins.
int argmax_lowest_index(std::span<const double> values) {
    int best = -1;
    double best_value = kNaN;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) continue;
        if (best < 0 || values[i] > best_value) {
            best = static_cast<int>(i);
            best_value = values[i];
        }
    }
    return best;
}

}  // namespace

EstimatorChoice EstimatorChoice::parse(const std::string& name) {
    const std::string id = to_lower(name);
    EstimatorChoice choice;
    if (id == "mle") {
        choice.kind = Kind::Mle;
        choice.label = "MLE";
        return choice;
    }
    if (id == "wmle") {
        choice.kind = Kind::Wmle;
        choice.label = "WMLE";
        choice.em.weight = {WeightDescriptor::Kind::NDCGDecay, 10.0};
        return choice;
    }
    if (id == "mes") {
        choice.kind = Kind::Mes;
        choice.label = "MES";
        return choice;
    }
    if (id.rfind("bv", 0) == 0) {
        const std::string arg = id.substr(2);
        char* end = nullptr;
        const double gamma = std::strtod(arg.c_str(), &end);
        if (arg.empty() || end != arg.c_str() + arg.size())
            throw domain_error("cannot parse BV gamma from '" + name + "'");
        choice.kind = Kind::Bv;
        choice.bv.gamma = gamma;
        choice.label = "BV " + format_gamma(gamma);
        return choice;
    }
    throw domain_error("unknown estimator '" + name + "' (expected bv<gamma>|mle|wmle|mes)");
}

std::vector<EstimatorChoice> EstimatorChoice::default_set() {
    return {parse("bv0.1"), parse("bv0.01"), parse("mle"), parse("wmle"), parse("mes")};
}

RankDataset AlgorithmInput::load() const {
    if (file && synthetic)
        throw domain_error("algorithm '" + name + "': give a file or a synthetic spec, not both");
    if (file) {
        const LoadedRanks loaded = read_rank_file(*file);
        return loaded.global();
    }
    if (synthetic) return generate_truth(*synthetic);
    throw domain_error("algorithm '" + name + "': no input configured");
}

void ExperimentPlan::validate() const {
    if (algorithms.empty()) throw domain_error("plan: at least one algorithm required");
    if (estimators.empty()) throw domain_error("plan: at least one estimator required");
    if (metrics.empty() || cutoffs.empty())
        throw domain_error("plan: metrics and cutoffs must be non-empty");
    if (repeats < 1) throw domain_error("plan: repeats must be >= 1");
    if (pool_size < 2) throw domain_error("plan: pool size must be >= 2");
    if (max_rank < 1) throw domain_error("plan: max_rank must be >= 1");
    for (const int k : cutoffs)
        if (k < 1) throw domain_error("plan: cutoffs must be >= 1");
    for (const int n : sweep_pool_sizes)
        if (n < 2) throw domain_error("plan: sweep pool sizes must be >= 2");
}

std::uint64_t repeat_seed(std::uint64_t plan_seed, int repeat) {
    const std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    return mix64(mix64(plan_seed) + golden * (static_cast<std::uint64_t>(repeat) + 1));
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ExperimentPlan load_plan(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw parse_error("cannot open config: " + config_path.string());
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("config " + config_path.string() + ": " + e.what());
    }

    ExperimentPlan plan;
    try {
        for (const auto& entry : cfg.at("algorithms")) {
            AlgorithmInput input;
            input.name = entry.at("name").get<std::string>();
            if (entry.contains("file")) {
                std::filesystem::path p = entry.at("file").get<std::string>();
                if (p.is_relative()) p = config_path.parent_path() / p;
                input.file = p;
            } else {
                TruthSpec spec;
                spec.family = parse_family(entry.at("family").get<std::string>());
                spec.num_items = entry.at("num_items").get<int>();
                spec.num_users = entry.at("num_users").get<int>();
                if (entry.contains("param")) spec.param = entry.at("param").get<double>();
                if (entry.contains("seed")) spec.seed = entry.at("seed").get<std::uint64_t>();
                input.synthetic = std::move(spec);
            }
            plan.algorithms.push_back(std::move(input));
        }
        if (cfg.contains("estimators")) {
            plan.estimators.clear();
            for (const auto& name : cfg.at("estimators"))
                plan.estimators.push_back(EstimatorChoice::parse(name.get<std::string>()));
        }
        if (cfg.contains("metrics")) {
            plan.metrics.clear();
            for (const auto& name : cfg.at("metrics"))
                plan.metrics.push_back(parse_metric(name.get<std::string>()));
        }
        if (cfg.contains("k")) plan.cutoffs = cfg.at("k").get<std::vector<int>>();
        if (cfg.contains("repeats")) plan.repeats = cfg.at("repeats").get<int>();
        if (cfg.contains("n")) plan.pool_size = cfg.at("n").get<int>();
        if (cfg.contains("scheme")) plan.scheme = parse_scheme(cfg.at("scheme").get<std::string>());
        if (cfg.contains("model_scheme"))
            plan.model_scheme = parse_scheme(cfg.at("model_scheme").get<std::string>());
        if (cfg.contains("seed")) plan.seed = cfg.at("seed").get<std::uint64_t>();
        if (cfg.contains("max_rank")) plan.max_rank = cfg.at("max_rank").get<int>();
        if (cfg.contains("sweep_n"))
            plan.sweep_pool_sizes = cfg.at("sweep_n").get<std::vector<int>>();
        if (cfg.contains("threads")) plan.threads = cfg.at("threads").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("config " + config_path.string() + ": " + e.what());
    }
    plan.validate();
    return plan;
}

TableResult run_estimation_table(const ExperimentPlan& plan) {
    const SampleRuns runs = run_samples(plan);

    TableResult result;
    result.repeats = plan.repeats;
    for (const EstimatorChoice& e : plan.estimators) result.estimators.push_back(e.label);

    for (const auto& algo : runs.algos) {
        std::size_t cell = 0;
        for (const MetricKind metric : plan.metrics) {
            for (const int k : plan.cutoffs) {
                TableResult::Row row;
                row.algo = algo.name;
                row.metric = to_string(metric);
                row.k = k;
                row.exact = algo.exact[cell];
                std::vector<double> per_repeat(static_cast<std::size_t>(plan.repeats));
                for (std::size_t e = 0; e < plan.estimators.size(); ++e) {
                    for (int rep = 0; rep < plan.repeats; ++rep)
                        per_repeat[static_cast<std::size_t>(rep)] =
                            algo.values[static_cast<std::size_t>(rep)][e][cell];
                    const MeanStd agg = aggregate(per_repeat);
                    row.mean.push_back(agg.mean);
                    row.stddev.push_back(agg.stddev);
                    row.ok_repeats.push_back(agg.count);
                }
                result.rows.push_back(std::move(row));
                ++cell;
            }
        }
    }
    return result;
}

void write_table_csv(const std::filesystem::path& path, const TableResult& result) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write table: " + path.string());
    out << "algo,metric,K,Exact";
    for (const std::string& label : result.estimators) out << ',' << label;
    out << "\n";
    char exact_buf[32];
    for (const auto& row : result.rows) {
        std::snprintf(exact_buf, sizeof(exact_buf), "%.4f", row.exact);
        out << row.algo << ',' << row.metric << ',' << row.k << ',' << exact_buf;
        for (std::size_t e = 0; e < result.estimators.size(); ++e)
            out << ',' << format_cell(row.mean[e], row.stddev[e]);
        out << "\n";
    }
    if (!out) throw parse_error("failed writing table: " + path.string());
}

ReportTable to_report(const TableResult& result) {
    ReportTable table;
    for (const auto& row : result.rows) {
        ReportRow exact_row;
        exact_row.algo = row.algo;
        exact_row.metric = row.metric;
        exact_row.k = row.k;
        exact_row.estimator = "Exact";
        exact_row.mean = row.exact;
        exact_row.stddev = 0.0;
        exact_row.repeats = result.repeats;
        table.push_back(std::move(exact_row));
        for (std::size_t e = 0; e < result.estimators.size(); ++e) {
            ReportRow r;
            r.algo = row.algo;
            r.metric = row.metric;
            r.k = row.k;
            r.estimator = result.estimators[e];
            r.mean = row.mean[e];
            r.stddev = row.stddev[e];
            r.repeats = row.ok_repeats[e];
            table.push_back(std::move(r));
        }
    }
    return table;
}

WinnerResult run_winner_prediction(const ExperimentPlan& plan) {
    if (plan.algorithms.size() < 2)
        throw domain_error("winner prediction needs at least 2 algorithms");
    const SampleRuns runs = run_samples(plan);

    WinnerResult result;
    result.repeats = plan.repeats;
    for (const EstimatorChoice& e : plan.estimators) result.estimators.push_back(e.label);

    const std::size_t n_algos = runs.algos.size();
    std::size_t cell = 0;
    for (const MetricKind metric : plan.metrics) {
        for (const int k : plan.cutoffs) {
            WinnerResult::Row row;
            row.metric = to_string(metric);
            row.k = k;
            row.successes.assign(plan.estimators.size(), 0);

            std::vector<double> exact(n_algos);
            for (std::size_t a = 0; a < n_algos; ++a) exact[a] = runs.algos[a].exact[cell];
            const int exact_winner = argmax_lowest_index(exact);

            std::vector<double> estimated(n_algos);
            for (std::size_t e = 0; e < plan.estimators.size(); ++e) {
                for (int rep = 0; rep < plan.repeats; ++rep) {
                    for (std::size_t a = 0; a < n_algos; ++a)
                        estimated[a] =
                            runs.algos[a].values[static_cast<std::size_t>(rep)][e][cell];
                    if (argmax_lowest_index(estimated) == exact_winner)
                        ++row.successes[e];
                }
            }
            result.rows.push_back(std::move(row));
            ++cell;
        }
    }
    return result;
}

void write_winners_csv(const std::filesystem::path& path, const WinnerResult& result) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write winners table: " + path.string());
    out << "K,metric,repeats";
    for (const std::string& label : result.estimators) out << ',' << label;
    out << "\n";
    for (const auto& row : result.rows) {
        out << row.k << ',' << row.metric << ',' << result.repeats;
        for (const int s : row.successes) out << ',' << s;
        out << "\n";
    }
    if (!out) throw parse_error("failed writing winners table: " + path.string());
}

namespace {

DistributionCurves run_curves_for(const ExperimentPlan& plan, const AlgorithmInput& input,
                                  int pool_size) {
    const RankDataset truth = input.load();
    if (pool_size > truth.num_items)
        throw domain_error("pool size exceeds catalog for algorithm '" + input.name + "'");

    ExperimentPlan local = plan;
    local.pool_size = pool_size;
    const AlgorithmRunner runner(local, truth);

    const int emit = std::min(plan.max_rank, truth.num_items);
    const RankPmf true_pmf = empirical_pmf(truth.ranks, truth.num_items);

    DistributionCurves curves;
    curves.algo = input.name;
    curves.pool_size = pool_size;
    curves.max_rank = emit;
    for (const EstimatorChoice& e : plan.estimators) curves.estimators.push_back(e.label);

    // Per-repeat learned pmfs, stored by repeat index then tree-reduced so the
    // average does not depend on thread scheduling.
    std::vector<std::vector<std::vector<double>>> learned(
        plan.estimators.size(),
        std::vector<std::vector<double>>(static_cast<std::size_t>(plan.repeats)));
    parallel_over_repeats(plan.repeats, plan.threads, [&](int rep) {
        const SampledRanks sr = sample_ranks(truth, pool_size, plan.scheme,
                                             repeat_seed(plan.seed, rep));
        for (std::size_t e = 0; e < plan.estimators.size(); ++e) {
            const RankPmf pmf = runner.learn_pmf(e, sr);
            learned[e][static_cast<std::size_t>(rep)].assign(pmf.mass().begin(),
                                                             pmf.mass().end());
        }
    });

    curves.true_pmf.resize(static_cast<std::size_t>(emit));
    curves.true_cdf.resize(static_cast<std::size_t>(emit));
    double cdf = 0.0;
    for (int r = 1; r <= emit; ++r) {
        curves.true_pmf[static_cast<std::size_t>(r - 1)] = true_pmf.at_rank(r);
        cdf += true_pmf.at_rank(r);
        curves.true_cdf[static_cast<std::size_t>(r - 1)] = cdf;
    }

    for (std::size_t e = 0; e < plan.estimators.size(); ++e) {
        // fixed-tree average over repeats
        std::vector<std::vector<double>> level = std::move(learned[e]);
        while (level.size() > 1) {
            std::vector<std::vector<double>> next;
            next.reserve((level.size() + 1) / 2);
            for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
                std::vector<double> merged = std::move(level[i]);
                const std::vector<double>& rhs = level[i + 1];
                for (std::size_t j = 0; j < merged.size(); ++j) merged[j] += rhs[j];
                next.push_back(std::move(merged));
            }
            if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
            level = std::move(next);
        }
        std::vector<double>& mean_pmf = level.front();
        for (double& v : mean_pmf) v /= plan.repeats;

        std::vector<double> pmf_out(static_cast<std::size_t>(emit));
        std::vector<double> cdf_out(static_cast<std::size_t>(emit));
        double acc = 0.0;
        for (int r = 0; r < emit; ++r) {
            pmf_out[static_cast<std::size_t>(r)] = mean_pmf[static_cast<std::size_t>(r)];
            acc += mean_pmf[static_cast<std::size_t>(r)];
            cdf_out[static_cast<std::size_t>(r)] = acc;
        }
        curves.est_pmf.push_back(std::move(pmf_out));
        curves.est_cdf.push_back(std::move(cdf_out));
    }
    return curves;
}

}  // namespace

std::vector<DistributionCurves> run_distribution_accuracy(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<DistributionCurves> out;
    for (const AlgorithmInput& algo : plan.algorithms)
        out.push_back(run_curves_for(plan, algo, plan.pool_size));
    return out;
}

std::vector<DistributionCurves> run_sample_size_sweep(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<DistributionCurves> out;
    for (const int n : plan.sweep_pool_sizes)
        for (const AlgorithmInput& algo : plan.algorithms)
            out.push_back(run_curves_for(plan, algo, n));
    return out;
}

void write_curves_csv(const std::filesystem::path& path, const DistributionCurves& curves) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write curves: " + path.string());
    out << "R,true_pmf,true_cdf";
    for (const std::string& label : curves.estimators)
        out << ',' << label << "_pmf," << label << "_cdf";
    out << "\n";
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        out << ',' << buf;
    };
    for (int r = 0; r < curves.max_rank; ++r) {
        out << (r + 1);
        emit(curves.true_pmf[static_cast<std::size_t>(r)]);
        emit(curves.true_cdf[static_cast<std::size_t>(r)]);
        for (std::size_t e = 0; e < curves.estimators.size(); ++e) {
            emit(curves.est_pmf[e][static_cast<std::size_t>(r)]);
            emit(curves.est_cdf[e][static_cast<std::size_t>(r)]);
        }
        out << "\n";
    }
    if (!out) throw parse_error("failed writing curves: " + path.string());
}

void write_curves_svg(const std::filesystem::path& path, const DistributionCurves& curves) {
    const int width = 720, height = 480, margin = 50;
    const double x_span = std::max(1, curves.max_rank - 1);

    std::ofstream out(path);
    if (!out) throw parse_error("cannot write svg: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << curves.algo << " CDF, n=" << curves.pool_size << "</text>\n";

    static const char* kColors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    auto polyline = [&](const std::vector<double>& ys, const char* color) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        char buf[64];
        for (int r = 0; r < curves.max_rank; ++r) {
            const double x = margin + (width - 2.0 * margin) * r / x_span;
            const double y =
                height - margin - (height - 2.0 * margin) * ys[static_cast<std::size_t>(r)];
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x, y);
            out << buf;
        }
        out << "\"/>\n";
    };

    polyline(curves.true_cdf, kColors[0]);
    for (std::size_t e = 0; e < curves.estimators.size(); ++e)
        polyline(curves.est_cdf[e], kColors[1 + e % 6]);

    int legend_y = 40;
    out << "<text x=\"" << width - margin - 150 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[0]
        << "\">empirical</text>\n";
    for (std::size_t e = 0; e < curves.estimators.size(); ++e) {
        legend_y += 16;
        out << "<text x=\"" << width - margin - 150 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[1 + e % 6]
            << "\">" << curves.estimators[e] << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw parse_error("failed writing svg: " + path.string());
}

}  // namespace rankdist
