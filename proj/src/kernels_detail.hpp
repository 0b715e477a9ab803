// Internal declarations of the per-ISA kernel variants. Each namespace is
// defined in its own translation unit compiled with the matching target flags;
// only call through the dispatcher after the runtime capability check.

#pragma once

#include <cstddef>

namespace rankdist::kern {

#if defined(RANKDIST_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t len);
double dot3(const double* a, const double* b, const double* c, std::size_t len);
void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len);
void axpy(double* out, double s, const double* a, std::size_t len);
double sum(const double* a, std::size_t len);
double max_abs_diff(const double* a, const double* b, std::size_t len);
}  // namespace avx2
#endif

#if defined(RANKDIST_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t len);
double dot3(const double* a, const double* b, const double* c, std::size_t len);
void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len);
void axpy(double* out, double s, const double* a, std::size_t len);
double sum(const double* a, std::size_t len);
double max_abs_diff(const double* a, const double* b, std::size_t len);
}  // namespace neon
#endif

}  // namespace rankdist::kern
