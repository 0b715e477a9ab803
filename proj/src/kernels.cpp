#include "rankdist/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "rankdist/types.hpp"
#include "kernels_detail.hpp"

namespace rankdist::kern {

namespace scalar {

double dot(const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
    return acc;
}

double dot3(const double* a, const double* b, const double* c, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i] * c[i];
    return acc;
}

void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] += s * a[i] * b[i];
}

void axpy(double* out, double s, const double* a, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] += s * a[i];
}

double sum(const double* a, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i];
    return acc;
}

double max_abs_diff(const double* a, const double* b, std::size_t len) {
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace scalar

namespace {

struct Vtable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    void (*scaled_mul_add)(double*, const double*, const double*, double, std::size_t);
    void (*axpy)(double*, double, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*max_abs_diff)(const double*, const double*, std::size_t);
};

constexpr Vtable kScalarVtable = {
    scalar::dot, scalar::dot3, scalar::scaled_mul_add,
    scalar::axpy, scalar::sum, scalar::max_abs_diff,
};

#if defined(RANKDIST_HAVE_AVX2)
constexpr Vtable kAvx2Vtable = {
    avx2::dot, avx2::dot3, avx2::scaled_mul_add,
    avx2::axpy, avx2::sum, avx2::max_abs_diff,
};

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

#if defined(RANKDIST_HAVE_NEON)
constexpr Vtable kNeonVtable = {
    neon::dot, neon::dot3, neon::scaled_mul_add,
    neon::axpy, neon::sum, neon::max_abs_diff,
};
#endif

Backend detect_backend() {
    if (const char* env = std::getenv("RANKDIST_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
#if defined(RANKDIST_HAVE_AVX2)
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::Avx2;
#endif
#if defined(RANKDIST_HAVE_NEON)
        if (std::strcmp(env, "neon") == 0) return Backend::Neon;
#endif
        return Backend::Scalar;
    }
#if defined(RANKDIST_HAVE_AVX2)
    if (cpu_has_avx2()) return Backend::Avx2;
#endif
#if defined(RANKDIST_HAVE_NEON)
    return Backend::Neon;
#else
    return Backend::Scalar;
#endif
}

const Vtable* vtable_for(Backend b) {
    switch (b) {
        case Backend::Scalar: return &kScalarVtable;
#if defined(RANKDIST_HAVE_AVX2)
        case Backend::Avx2: return &kAvx2Vtable;
#endif
#if defined(RANKDIST_HAVE_NEON)
        case Backend::Neon: return &kNeonVtable;
#endif
        default: return nullptr;
    }
}

Backend g_backend = detect_backend();
const Vtable* g_vtable = vtable_for(g_backend);

}  // namespace

Backend active_backend() { return g_backend; }

const char* backend_name() {
    switch (g_backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "?";
}

void force_backend(Backend b) {
    const Vtable* vt = vtable_for(b);
    if (vt == nullptr)
        throw domain_error("kern::force_backend: backend not available in this build");
#if defined(RANKDIST_HAVE_AVX2)
    if (b == Backend::Avx2 && !cpu_has_avx2())
        throw domain_error("kern::force_backend: CPU lacks AVX2/FMA");
#endif
    g_backend = b;
    g_vtable = vt;
}

double dot(const double* a, const double* b, std::size_t len) {
    return g_vtable->dot(a, b, len);
}

double dot3(const double* a, const double* b, const double* c, std::size_t len) {
    return g_vtable->dot3(a, b, c, len);
}

void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len) {
    g_vtable->scaled_mul_add(out, a, b, s, len);
}

void axpy(double* out, double s, const double* a, std::size_t len) {
    g_vtable->axpy(out, s, a, len);
}

double sum(const double* a, std::size_t len) {
    return g_vtable->sum(a, len);
}

double max_abs_diff(const double* a, const double* b, std::size_t len) {
    return g_vtable->max_abs_diff(a, b, len);
}

}  // namespace rankdist::kern
