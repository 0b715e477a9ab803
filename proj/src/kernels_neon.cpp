// NEON (AArch64) kernel variants. NEON is baseline on AArch64, so no runtime
// capability probe is needed beyond the architecture guard.

#include "kernels_detail.hpp"

#if defined(RANKDIST_HAVE_NEON)

#include <arm_neon.h>

#include <cmath>

namespace rankdist::kern::neon {

double dot(const double* a, const double* b, std::size_t len) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    for (; i + 2 <= len; i += 2) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < len; ++i) acc += a[i] * b[i];
    return acc;
}

double dot3(const double* a, const double* b, const double* c, std::size_t len) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, ab, vld1q_f64(c + i));
    }
    double s = vaddvq_f64(acc);
    for (; i < len; ++i) s += a[i] * b[i] * c[i];
    return s;
}

void scaled_mul_add(double* out, const double* a, const double* b, double s, std::size_t len) {
    const float64x2_t sv = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        vst1q_f64(out + i, vfmaq_f64(vld1q_f64(out + i), sv, ab));
    }
    for (; i < len; ++i) out[i] += s * a[i] * b[i];
}

void axpy(double* out, double s, const double* a, std::size_t len) {
    const float64x2_t sv = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        vst1q_f64(out + i, vfmaq_f64(vld1q_f64(out + i), sv, vld1q_f64(a + i)));
    }
    for (; i < len; ++i) out[i] += s * a[i];
}

double sum(const double* a, std::size_t len) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
    double s = vaddvq_f64(acc);
    for (; i < len; ++i) s += a[i];
    return s;
}

double max_abs_diff(const double* a, const double* b, std::size_t len) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        acc = vmaxq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    double m = vmaxvq_f64(acc);
    for (; i < len; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace rankdist::kern::neon

#endif  // RANKDIST_HAVE_NEON
