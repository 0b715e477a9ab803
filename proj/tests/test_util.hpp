// Tiny check harness shared by the test binaries: counts failures, prints one
// FAIL line per violated check, and reports a summary with the exit code.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace testutil {

inline int g_checks = 0;
inline int g_failures = 0;

inline void record(bool ok, const char* file, int line, const std::string& what) {
    ++g_checks;
    if (!ok) {
        ++g_failures;
        std::printf("FAIL %s:%d: %s\n", file, line, what.c_str());
    }
}

inline bool close(double a, double b, double tol) {
    if (std::isnan(a) || std::isnan(b)) return false;
    return std::fabs(a - b) <= tol;
}

inline int summary(const char* suite) {
    std::printf("%s: %d checks, %d failures\n", suite, g_checks, g_failures);
    return g_failures == 0 ? 0 : 1;
}

}  // namespace testutil

#define CHECK(cond) ::testutil::record((cond), __FILE__, __LINE__, #cond)

#define CHECK_CLOSE(a, b, tol)                                                        \
    do {                                                                              \
        const double va = (a), vb = (b);                                              \
        ::testutil::record(::testutil::close(va, vb, (tol)), __FILE__, __LINE__,      \
                           std::string(#a " ~= " #b " : ") + std::to_string(va) +     \
                               " vs " + std::to_string(vb));                          \
    } while (0)

#define CHECK_THROWS(expr, extype)                                                    \
    do {                                                                              \
        bool caught = false;                                                          \
        try {                                                                         \
            (void)(expr);                                                             \
        } catch (const extype&) {                                                     \
            caught = true;                                                            \
        } catch (...) {                                                               \
        }                                                                             \
        ::testutil::record(caught, __FILE__, __LINE__, #expr " should throw " #extype); \
    } while (0)
