#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "rankdist/rankfile.hpp"
#include "rankdist/simulate.hpp"
#include "test_util.hpp"

using namespace rankdist;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "rankdist_test_ingest";
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

bool error_mentions(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
    } catch (const parse_error& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

void global_round_trip() {
    const fs::path path = temp_dir() / "global.ranks";
    // header N=3706 (ml-1m catalog size) accepted
    const RankDataset ds(3706, {1, 3706, 17, 42});
    write_rank_file(path, ds, {"EASE", "ml-1m"});
    const LoadedRanks loaded = read_rank_file(path);
    CHECK(loaded.is_global());
    CHECK(loaded.meta.algo == "EASE");
    CHECK(loaded.meta.dataset == "ml-1m");
    CHECK(loaded.global().num_items == 3706);
    CHECK(loaded.global().ranks == ds.ranks);
    CHECK_THROWS(loaded.sampled(), domain_error);
}

void sampled_round_trip() {
    const fs::path path = temp_dir() / "sampled.ranks";
    const SampledRanks sr(2000, 100, Scheme::WithoutReplacement, {1, 7, 100});
    write_rank_file(path, sr, {"NeuMF", "synthetic"});
    const LoadedRanks loaded = read_rank_file(path);
    CHECK(!loaded.is_global());
    const SampledRanks& parsed = loaded.sampled();
    CHECK(parsed.num_items == 2000);
    CHECK(parsed.pool_size == 100);
    CHECK(parsed.scheme == Scheme::WithoutReplacement);
    CHECK(parsed.ranks == sr.ranks);
}

void random_round_trips() {
    SplitMix64 rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_items = 2 + static_cast<int>(rng.next_below(5000));
        const int n_users = 1 + static_cast<int>(rng.next_below(200));
        const int pool = 2 + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(n_items - 1)));
        std::vector<int> ranks(static_cast<std::size_t>(n_users));
        const bool global = rng.next() & 1;
        for (int& r : ranks)
            r = 1 + static_cast<int>(rng.next_below(global ? n_items : pool));

        const fs::path path = temp_dir() / "roundtrip.ranks";
        if (global) {
            const RankDataset ds(n_items, std::move(ranks));
            write_rank_file(path, ds, {"a", "d"});
            CHECK(read_rank_file(path).global().ranks == ds.ranks);
        } else {
            const Scheme scheme =
                rng.next() & 1 ? Scheme::WithReplacement : Scheme::WithoutReplacement;
            const SampledRanks sr(n_items, pool, scheme, std::move(ranks));
            write_rank_file(path, sr, {"a", "d"});
            const LoadedRanks loaded = read_rank_file(path);
            CHECK(loaded.sampled().ranks == sr.ranks);
            CHECK(loaded.sampled().scheme == scheme);
        }
    }
}

void parse_errors_name_lines() {
    const fs::path path = temp_dir() / "bad.ranks";

    // rank 0 on line 5
    write_text(path,
               "#rankfile v1 kind=sampled N=100 n=10 scheme=wr algo=a dataset=d\n"
               "1\n2\n3\n0\n4\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, ":5"));
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "rank 0"));

    // rank above the declared pool, line 2
    write_text(path,
               "#rankfile v1 kind=sampled N=100 n=10 scheme=wr algo=a dataset=d\n"
               "11\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, ":2"));

    // malformed header variants
    write_text(path, "#rankfile v2 kind=global N=10 n=0 scheme=wr algo=a dataset=d\n1\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, ":1"));
    write_text(path, "#rankfile v1 kind=global N=10 scheme=wr algo=a dataset=d\n1\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "n="));
    write_text(path, "#rankfile v1 kind=global N=10 n=5 scheme=wr algo=a dataset=d\n1\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "n=0"));
    write_text(path, "#rankfile v1 kind=sampled N=10 n=20 scheme=wr algo=a dataset=d\n1\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "[2, N]"));
    write_text(path, "#rankfile v1 kind=sampled N=10 n=5 scheme=xx algo=a dataset=d\n1\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "scheme"));
    write_text(path, "#rankfile v1 kind=global N=10 n=0 scheme=wr algo=a dataset=d\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "no ranks"));
    write_text(path, "#rankfile v1 kind=global N=10 n=0 scheme=wr algo=a dataset=d extra=1\n1\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, "trailing"));

    // truncated mid-number
    write_text(path,
               "#rankfile v1 kind=sampled N=100 n=10 scheme=wr algo=a dataset=d\n"
               "1\n2x\n");
    CHECK(error_mentions([&] { (void)read_rank_file(path); }, ":3"));

    CHECK_THROWS(read_rank_file(temp_dir() / "missing.ranks"), parse_error);
}

void report_round_trip_is_exact() {
    SplitMix64 rng(9090);
    ReportTable table;
    for (int i = 0; i < 40; ++i) {
        ReportRow row;
        row.algo = "algo" + std::to_string(i % 3);
        row.metric = i % 2 ? "Recall" : "NDCG";
        row.k = 1 + static_cast<int>(rng.next_below(100));
        row.estimator = i % 4 ? "MLE" : "BV 0.1";
        // full double range: exact equality after the round trip is required
        row.mean = rng.next_double() * std::pow(10.0, static_cast<double>(rng.next_below(8)) - 4);
        row.stddev = rng.next_double() * 1e-3;
        row.repeats = static_cast<int>(rng.next_below(1000));
        table.push_back(std::move(row));
    }
    const fs::path path = temp_dir() / "report.csv";
    write_report_csv(path, table);
    const ReportTable parsed = read_report_csv(path);
    CHECK(parsed == table);
}

}  // namespace

int main() {
    global_round_trip();
    sampled_round_trip();
    random_round_trips();
    parse_errors_name_lines();
    report_round_trip_is_exact();
    return testutil::summary("test_rankfile");
}
