#include "rankdist/linalg.hpp"

#include <cmath>

namespace rankdist {

void cholesky_factor_inplace(Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw domain_error("cholesky_factor_inplace: matrix must be square");

    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0) || std::isnan(d))
            throw solver_error("cholesky: non-positive pivot at index " + std::to_string(j));
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
    }
}

void cholesky_substitute(const Matrix& chol, std::span<double> rhs) {
    const std::size_t n = chol.rows();
    if (rhs.size() != n) throw domain_error("cholesky_substitute: rhs size mismatch");

    // Forward solve L y = rhs.
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= chol(i, k) * rhs[k];
        rhs[i] = s / chol(i, i);
    }
    // Back solve L^T x = y.
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= chol(k, ii) * rhs[k];
        rhs[ii] = s / chol(ii, ii);
    }
}

Matrix cholesky_factor_jittered(const Matrix& a, double jitter) {
    Matrix work = a;
    try {
        cholesky_factor_inplace(work);
        return work;
    } catch (const solver_error&) {
        // retry with diagonal jitter
    }
    work = a;
    for (std::size_t i = 0; i < work.rows(); ++i) work(i, i) += jitter;
    cholesky_factor_inplace(work);
    return work;
}

std::vector<double> solve_spd(const Matrix& a, std::span<const double> rhs, double jitter) {
    Matrix chol = cholesky_factor_jittered(a, jitter);
    std::vector<double> x(rhs.begin(), rhs.end());
    cholesky_substitute(chol, x);
    return x;
}

}  // namespace rankdist
