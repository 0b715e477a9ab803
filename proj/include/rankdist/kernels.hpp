// Flat double-precision kernels behind the estimator inner loops.
//
// Every kernel has a scalar reference implementation (kern::scalar) and, where
// the platform provides them, an AVX2 or NEON variant. Dispatch is resolved
// once at runtime from CPU capabilities; force_backend() overrides it (used by
// the equivalence tests and the RANKDIST_BACKEND environment variable).
//
// SIMD and scalar variants may differ in summation order, so results agree to
// rounding error, not bit-exactly. Within one process the selected backend is
// fixed, which keeps whole-program output deterministic.

#pragma once

#include <cstddef>

namespace rankdist::kern {

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
const char* backend_name();

// Selects a backend explicitly; throws rankdist::domain_error if the request
// is not supported on this machine.
void force_backend(Backend b);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t len);

// sum_i a[i]*b[i]*c[i]
double dot3(const double* a, const double* b, const double* c, std::size_t len);

// out[i] += s * a[i] * b[i]
void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len);

// out[i] += s * a[i]
void axpy(double* out, double s, const double* a, std::size_t len);

// sum_i a[i]
double sum(const double* a, std::size_t len);

// max_i |a[i] - b[i]|
double max_abs_diff(const double* a, const double* b, std::size_t len);

// Reference kernels, always available; the dispatch targets must match these
// to rounding error (tests/test_kernels.cpp).
namespace scalar {
double dot(const double* a, const double* b, std::size_t len);
double dot3(const double* a, const double* b, const double* c, std::size_t len);
void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len);
void axpy(double* out, double s, const double* a, std::size_t len);
double sum(const double* a, std::size_t len);
double max_abs_diff(const double* a, const double* b, std::size_t len);
}  // namespace scalar

}  // namespace rankdist::kern
