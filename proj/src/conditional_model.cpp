#include "rankdist/conditional_model.hpp"

#include <cmath>
#include <limits>

#include "rankdist/kernels.hpp"
#include "rankdist/metrics.hpp"

namespace rankdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProbFlush = 1e-300;

// log C(a, b) for integers 0 <= b <= a; exact 0 at the boundary cases.
double log_choose(int a, int b) {
    if (b == 0 || b == a) return 0.0;
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

double log_binomial_conditional(int global_rank, int sampled_rank, int num_items,
                                int pool_size) {
    const int successes = sampled_rank - 1;   // items drawn that outrank the relevant one
    const int draws = pool_size - 1;
    if (global_rank == 1) return successes == 0 ? 0.0 : kNegInf;
    if (global_rank == num_items) return successes == draws ? 0.0 : kNegInf;
    // theta and 1-theta computed as exact rationals of (R-1, N-R) to avoid
    // cancellation near the endpoints.
    const double log_theta =
        std::log(static_cast<double>(global_rank - 1)) - std::log(static_cast<double>(num_items - 1));
    const double log_theta_c =
        std::log(static_cast<double>(num_items - global_rank)) - std::log(static_cast<double>(num_items - 1));
    return log_choose(draws, successes) + successes * log_theta + (draws - successes) * log_theta_c;
}

double log_hypergeom_conditional(int global_rank, int sampled_rank, int num_items,
                                 int pool_size) {
    const int successes = sampled_rank - 1;
    const int draws = pool_size - 1;
    const int marked = global_rank - 1;        // items outranking the relevant one
    const int unmarked = num_items - global_rank;
    if (successes > marked || draws - successes > unmarked) return kNegInf;
    return log_choose(marked, successes) + log_choose(unmarked, draws - successes) -
           log_choose(num_items - 1, draws);
}

}  // namespace

double log_conditional(int global_rank, int sampled_rank, int num_items, int pool_size,
                       Scheme scheme) {
    if (num_items < 2 || pool_size < 2 || pool_size > num_items)
        throw domain_error("log_conditional: invalid (num_items, pool_size)");
    if (global_rank < 1 || global_rank > num_items)
        throw domain_error("log_conditional: global rank outside [1, N]");
    if (sampled_rank < 1 || sampled_rank > pool_size)
        throw domain_error("log_conditional: sampled rank outside [1, n]");
    return scheme == Scheme::WithReplacement
               ? log_binomial_conditional(global_rank, sampled_rank, num_items, pool_size)
               : log_hypergeom_conditional(global_rank, sampled_rank, num_items, pool_size);
}

double conditional(int global_rank, int sampled_rank, int num_items, int pool_size,
                   Scheme scheme) {
    const double lp = log_conditional(global_rank, sampled_rank, num_items, pool_size, scheme);
    const double p = std::exp(lp);
    return p < kProbFlush ? 0.0 : p;
}

ConditionalModel::ConditionalModel(int num_items, int pool_size, Scheme scheme, Storage storage)
    : num_items_(num_items), pool_size_(pool_size), scheme_(scheme) {
    if (num_items < 2)
        throw domain_error("ConditionalModel: num_items must be >= 2");
    if (pool_size < 2 || pool_size > num_items)
        throw domain_error("ConditionalModel: pool_size must be in [2, num_items]");

    const long long cells = static_cast<long long>(num_items) * pool_size;
    const bool materialize =
        storage == Storage::Dense || (storage == Storage::Auto && cells <= 10'000'000LL);
    if (!materialize) return;

    table_.resize(static_cast<std::size_t>(cells));
    for (int r = 1; r <= pool_size_; ++r) {
        double* col = table_.data() + static_cast<std::size_t>(r - 1) * num_items_;
        for (int R = 1; R <= num_items_; ++R)
            col[R - 1] = conditional(R, r, num_items_, pool_size_, scheme_);
    }
}

void ConditionalModel::check_indices(int global_rank, int sampled_rank) const {
    if (global_rank < 1 || global_rank > num_items_)
        throw domain_error("ConditionalModel: global rank outside [1, N]");
    if (sampled_rank < 1 || sampled_rank > pool_size_)
        throw domain_error("ConditionalModel: sampled rank outside [1, n]");
}

double ConditionalModel::at(int global_rank, int sampled_rank) const {
    check_indices(global_rank, sampled_rank);
    if (dense())
        return table_[static_cast<std::size_t>(sampled_rank - 1) * num_items_ + (global_rank - 1)];
    return conditional(global_rank, sampled_rank, num_items_, pool_size_, scheme_);
}

double ConditionalModel::log_at(int global_rank, int sampled_rank) const {
    check_indices(global_rank, sampled_rank);
    return log_conditional(global_rank, sampled_rank, num_items_, pool_size_, scheme_);
}

std::span<const double> ConditionalModel::column(int sampled_rank, std::span<double> out) const {
    check_indices(1, sampled_rank);
    if (dense()) {
        return {table_.data() + static_cast<std::size_t>(sampled_rank - 1) * num_items_,
                static_cast<std::size_t>(num_items_)};
    }
    if (out.size() != static_cast<std::size_t>(num_items_))
        throw domain_error("ConditionalModel::column: buffer size must be N");
    for (int R = 1; R <= num_items_; ++R)
        out[static_cast<std::size_t>(R - 1)] =
            conditional(R, sampled_rank, num_items_, pool_size_, scheme_);
    return out;
}

void ConditionalModel::fill_row(int global_rank, std::span<double> out) const {
    check_indices(global_rank, 1);
    if (out.size() != static_cast<std::size_t>(pool_size_))
        throw domain_error("ConditionalModel::fill_row: buffer size must be n");
    for (int r = 1; r <= pool_size_; ++r)
        out[static_cast<std::size_t>(r - 1)] = at(global_rank, r);
}

RankPmf mixture_pmf(const RankPmf& pi, const ConditionalModel& model) {
    if (pi.support() != model.num_items())
        throw domain_error("mixture_pmf: pmf support must equal catalog size");
    const std::size_t n_items = static_cast<std::size_t>(model.num_items());
    std::vector<double> col_buf(model.dense() ? 0 : n_items);
    std::vector<double> q(static_cast<std::size_t>(model.pool_size()));
    for (int r = 1; r <= model.pool_size(); ++r) {
        auto col = model.column(r, col_buf);
        q[static_cast<std::size_t>(r - 1)] = kern::dot(pi.mass().data(), col.data(), n_items);
    }
    return RankPmf(std::move(q));
}

LsSystem assemble_ls_system(const RankPmf& prior, const ConditionalModel& model,
                            const MetricSpec& spec) {
    const int n_items = model.num_items();
    const int n_pool = model.pool_size();
    if (prior.support() != n_items)
        throw domain_error("assemble_ls_system: prior support must equal catalog size");
    if (spec.cutoff > n_items)
        throw domain_error("assemble_ls_system: cutoff exceeds catalog size");

    LsSystem sys;
    sys.a = Matrix(static_cast<std::size_t>(n_items), static_cast<std::size_t>(n_pool));
    sys.b.resize(static_cast<std::size_t>(n_items));
    sys.c.resize(static_cast<std::size_t>(n_pool));

    std::vector<double> sqrt_prior(static_cast<std::size_t>(n_items));
    for (int R = 1; R <= n_items; ++R)
        sqrt_prior[static_cast<std::size_t>(R - 1)] = std::sqrt(prior.at_rank(R));

    std::vector<double> col_buf(model.dense() ? 0 : static_cast<std::size_t>(n_items));
    for (int r = 1; r <= n_pool; ++r) {
        auto col = model.column(r, col_buf);
        double* a_col = sys.a.col(static_cast<std::size_t>(r - 1));
        for (int R = 0; R < n_items; ++R) a_col[R] = sqrt_prior[R] * col[R];
        sys.c[static_cast<std::size_t>(r - 1)] =
            kern::dot(prior.mass().data(), col.data(), static_cast<std::size_t>(n_items));
    }
    for (int R = 1; R <= n_items; ++R)
        sys.b[static_cast<std::size_t>(R - 1)] =
            sqrt_prior[static_cast<std::size_t>(R - 1)] *
            metric_weight(spec.kind, R, n_items, spec.cutoff);
    return sys;
}

}  // namespace rankdist
