// Minimal dense linear algebra: a column-major matrix and a Cholesky solve
// for the symmetric positive-definite systems the least-squares estimator
// produces. Not a general-purpose library.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankdist/types.hpp"

namespace rankdist {

// Column-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    double* col(std::size_t j) { return data_.data() + j * rows_; }
    const double* col(std::size_t j) const { return data_.data() + j * rows_; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Overwrites the lower triangle of a symmetric positive-definite matrix with
// its Cholesky factor L (A = L L^T). Throws solver_error on a non-positive
// pivot.
void cholesky_factor_inplace(Matrix& a);

// Solves L L^T x = rhs in place given the factor produced above.
void cholesky_substitute(const Matrix& chol, std::span<double> rhs);

// Factors a copy of A, retrying once with `jitter` added to the diagonal if
// the first attempt fails; throws solver_error if both fail.
Matrix cholesky_factor_jittered(const Matrix& a, double jitter = 1e-12);

// One-shot solve built from the pieces above.
std::vector<double> solve_spd(const Matrix& a, std::span<const double> rhs,
                              double jitter = 1e-12);

}  // namespace rankdist
