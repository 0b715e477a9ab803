#include "rankdist/rankfile.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rankdist {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& what) {
    throw parse_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

int parse_int(const std::filesystem::path& path, int line, const std::string& text,
              const std::string& what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail(path, line, "expected integer " + what + ", got '" + text + "'");
    return value;
}

// Header fields are positional: key=value tokens in a fixed order.
std::string expect_field(const std::filesystem::path& path, std::istringstream& in,
                         const std::string& key) {
    std::string token;
    if (!(in >> token)) fail(path, 1, "missing header field '" + key + "'");
    const std::string prefix = key + "=";
    if (token.rfind(prefix, 0) != 0)
        fail(path, 1, "expected header field '" + key + "=...', got '" + token + "'");
    return token.substr(prefix.size());
}

std::string check_token(const std::string& value, const std::string& what) {
    if (value.empty() || value.find_first_of(" \t\n") != std::string::npos)
        throw domain_error("rank file " + what + " must be a non-empty whitespace-free token");
    return value;
}

void write_header(std::ofstream& out, const char* kind, int num_items, int pool_size,
                  Scheme scheme, const RankFileMeta& meta) {
    out << "#rankfile v1 kind=" << kind << " N=" << num_items << " n=" << pool_size
        << " scheme=" << to_string(scheme) << " algo=" << check_token(meta.algo, "algo")
        << " dataset=" << check_token(meta.dataset, "dataset") << "\n";
}

}  // namespace

const RankDataset& LoadedRanks::global() const {
    if (!is_global()) throw domain_error("LoadedRanks: file holds sampled ranks, not global");
    return std::get<RankDataset>(data);
}

const SampledRanks& LoadedRanks::sampled() const {
    if (is_global()) throw domain_error("LoadedRanks: file holds global ranks, not sampled");
    return std::get<SampledRanks>(data);
}

LoadedRanks read_rank_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open rank file: " + path.string());

    std::string header;
    if (!std::getline(in, header)) fail(path, 1, "empty file");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "#rankfile" || version != "v1")
        fail(path, 1, "expected '#rankfile v1' header, got '" + header + "'");

    const std::string kind = expect_field(path, hs, "kind");
    if (kind != "global" && kind != "sampled")
        fail(path, 1, "kind must be 'global' or 'sampled', got '" + kind + "'");
    const int num_items = parse_int(path, 1, expect_field(path, hs, "N"), "N");
    const int pool_size = parse_int(path, 1, expect_field(path, hs, "n"), "n");
    const std::string scheme_str = expect_field(path, hs, "scheme");
    if (scheme_str != "wr" && scheme_str != "wor")
        fail(path, 1, "scheme must be 'wr' or 'wor', got '" + scheme_str + "'");
    const Scheme scheme =
        scheme_str == "wr" ? Scheme::WithReplacement : Scheme::WithoutReplacement;

    RankFileMeta meta;
    meta.algo = expect_field(path, hs, "algo");
    meta.dataset = expect_field(path, hs, "dataset");
    std::string extra;
    if (hs >> extra) fail(path, 1, "unexpected trailing header token '" + extra + "'");

    if (num_items < 2) fail(path, 1, "N must be >= 2");
    const bool is_global = kind == "global";
    if (is_global && pool_size != 0) fail(path, 1, "global rank files must carry n=0");
    if (!is_global && (pool_size < 2 || pool_size > num_items))
        fail(path, 1, "sampled rank files need n in [2, N]");

    const int bound = is_global ? num_items : pool_size;
    std::vector<int> ranks;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            fail(path, line_no, "blank line inside rank data");
        }
        const int rank = parse_int(path, line_no, line, "rank");
        if (rank < 1 || rank > bound)
            fail(path, line_no,
                 "rank " + std::to_string(rank) + " outside [1, " + std::to_string(bound) + "]");
        ranks.push_back(rank);
    }
    if (ranks.empty()) fail(path, line_no, "file contains no ranks");

    LoadedRanks loaded;
    loaded.meta = std::move(meta);
    if (is_global)
        loaded.data = RankDataset(num_items, std::move(ranks));
    else
        loaded.data = SampledRanks(num_items, pool_size, scheme, std::move(ranks));
    return loaded;
}

void write_rank_file(const std::filesystem::path& path, const RankDataset& ds,
                     const RankFileMeta& meta) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write rank file: " + path.string());
    write_header(out, "global", ds.num_items, 0, Scheme::WithReplacement, meta);
    for (int r : ds.ranks) out << r << "\n";
    if (!out) throw parse_error("failed writing rank file: " + path.string());
}

void write_rank_file(const std::filesystem::path& path, const SampledRanks& sr,
                     const RankFileMeta& meta) {
    sr.validate();
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write rank file: " + path.string());
    write_header(out, "sampled", sr.num_items, sr.pool_size, sr.scheme, meta);
    for (int r : sr.ranks) out << r << "\n";
    if (!out) throw parse_error("failed writing rank file: " + path.string());
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void write_report_csv(const std::filesystem::path& path, const ReportTable& table) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write report: " + path.string());
    out << "algo,metric,K,estimator,mean,std,repeats\n";
    for (const ReportRow& row : table) {
        out << row.algo << ',' << row.metric << ',' << row.k << ',' << row.estimator << ','
            << format_double(row.mean) << ',' << format_double(row.stddev) << ',' << row.repeats
            << "\n";
    }
    if (!out) throw parse_error("failed writing report: " + path.string());
}

ReportTable read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open report: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "algo,metric,K,estimator,mean,std,repeats")
        throw parse_error(path.string() + ":1: bad report header");

    ReportTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 7)
            fail(path, line_no, "expected 7 fields, got " + std::to_string(fields.size()));
        ReportRow row;
        row.algo = fields[0];
        row.metric = fields[1];
        row.k = parse_int(path, line_no, fields[2], "K");
        row.estimator = fields[3];
        row.mean = std::strtod(fields[4].c_str(), nullptr);
        row.stddev = std::strtod(fields[5].c_str(), nullptr);
        row.repeats = parse_int(path, line_no, fields[6], "repeats");
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace rankdist
