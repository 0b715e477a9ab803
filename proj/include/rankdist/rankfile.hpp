// Text formats between tools.
//
// Rank file (one per algorithm/dataset), line 1 header, one rank per line:
//
//   #rankfile v1 kind=<global|sampled> N=<int> n=<int> scheme=<wr|wor> algo=<str> dataset=<str>
//   12
//   3
//   ...
//
// kind=global carries n=0 (no sampling pool); kind=sampled carries the pool
// size n in [2, N]. algo/dataset are whitespace-free tokens. Parse failures
// name the offending line.
//
// Report CSV (long form): header algo,metric,K,estimator,mean,std,repeats with
// doubles at full precision so read(write(x)) round-trips exactly.

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "rankdist/types.hpp"

namespace rankdist {

class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RankFileMeta {
    std::string algo = "unknown";
    std::string dataset = "unknown";
};

struct LoadedRanks {
    RankFileMeta meta;
    std::variant<RankDataset, SampledRanks> data;

    bool is_global() const { return std::holds_alternative<RankDataset>(data); }
    const RankDataset& global() const;
    const SampledRanks& sampled() const;
};

LoadedRanks read_rank_file(const std::filesystem::path& path);

void write_rank_file(const std::filesystem::path& path, const RankDataset& ds,
                     const RankFileMeta& meta);
void write_rank_file(const std::filesystem::path& path, const SampledRanks& sr,
                     const RankFileMeta& meta);

struct ReportRow {
    std::string algo;
    std::string metric;
    int k = 0;
    std::string estimator;
    double mean = 0.0;
    double stddev = 0.0;
    int repeats = 0;

    bool operator==(const ReportRow&) const = default;
};

using ReportTable = std::vector<ReportRow>;

void write_report_csv(const std::filesystem::path& path, const ReportTable& table);
ReportTable read_report_csv(const std::filesystem::path& path);

}  // namespace rankdist
