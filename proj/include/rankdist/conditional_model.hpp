// Conditional distribution of the sampled rank given the global rank.
//
// An item at global rank R beats theta_R = (R-1)/(N-1) of the other items.
// Drawing the n-1 pool items with replacement, the number x = r-1 of sampled
// items ranked above it is Binomial(n-1, theta_R); drawing without
// replacement it is Hypergeometric(N-1 pool, R-1 marked, n-1 draws).
//
// The table is materialized densely (column-major: for fixed r, P(r|R) is
// contiguous over R) when N*n <= 10^7 and evaluated on demand above that.
// Both paths share a single log-gamma entry evaluator.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rankdist/linalg.hpp"
#include "rankdist/types.hpp"

namespace rankdist {

// Probability that a uniformly sampled irrelevant item outranks global rank R.
inline double rank_pick_probability(int rank, int num_items) {
    return static_cast<double>(rank - 1) / (num_items - 1);
}

// log P(r|R); -inf where the conditional is exactly zero.
double log_conditional(int global_rank, int sampled_rank, int num_items, int pool_size,
                       Scheme scheme);

// P(r|R). Values below 1e-300 are flushed to zero.
double conditional(int global_rank, int sampled_rank, int num_items, int pool_size,
                   Scheme scheme);

class ConditionalModel {
public:
    enum class Storage { Auto, Dense, Lazy };

    ConditionalModel(int num_items, int pool_size, Scheme scheme,
                     Storage storage = Storage::Auto);

    int num_items() const { return num_items_; }
    int pool_size() const { return pool_size_; }
    Scheme scheme() const { return scheme_; }
    bool dense() const { return !table_.empty(); }

    // P(r|R), 1-based.
    double at(int global_rank, int sampled_rank) const;
    double log_at(int global_rank, int sampled_rank) const;

    // Writes P(r|R) for R = 1..N into out (size N). When dense, returns the
    // internal column and leaves out untouched.
    std::span<const double> column(int sampled_rank, std::span<double> out) const;

    // Writes P(r|R) for r = 1..n into out (size n).
    void fill_row(int global_rank, std::span<double> out) const;

private:
    void check_indices(int global_rank, int sampled_rank) const;

    int num_items_;
    int pool_size_;
    Scheme scheme_;
    std::vector<double> table_;  // column-major [r-1][R-1], empty when lazy
};

// q(r) = sum_R pi(R) P(r|R): the sampled-rank distribution implied by a
// global-rank distribution.
RankPmf mixture_pmf(const RankPmf& pi, const ConditionalModel& model);

// The regularized least-squares system behind the bias-variance estimator:
//   A[R,r] = sqrt(P(R)) P(r|R),  b[R] = sqrt(P(R)) w^K(R),  c[r] = sum_R P(R) P(r|R).
struct LsSystem {
    Matrix a;                // N x n
    std::vector<double> b;   // N
    std::vector<double> c;   // n
};

LsSystem assemble_ls_system(const RankPmf& prior, const ConditionalModel& model,
                            const MetricSpec& spec);

}  // namespace rankdist
