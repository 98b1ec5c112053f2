#include "dpv/kern.hpp"

#include <atomic>
#include <cmath>

namespace dpv::kern {

namespace {

void s_row_or2(const uint64_t* a, const uint64_t* b, uint64_t* dst, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = a[i] | b[i];
}

void s_row_or3(const uint64_t* a, const uint64_t* b, const uint64_t* c, uint64_t* dst, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = a[i] | b[i] | c[i];
}

void s_row_and2(const uint64_t* a, const uint64_t* b, uint64_t* dst, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i];
}

void s_row_and3(const uint64_t* a, const uint64_t* b, const uint64_t* c, uint64_t* dst, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i] & c[i];
}

uint64_t s_popcount(const uint64_t* w, size_t n) {
    uint64_t total = 0;
    for (size_t i = 0; i < n; ++i) total += (uint64_t)__builtin_popcountll(w[i]);
    return total;
}

void s_sum_exp(const double* x, const double* y, size_t n, double kx, double ky, double* re,
               double* im) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double sr = 0.0, si = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double phase = -two_pi * (kx * x[i] + ky * y[i]);
        sr += std::cos(phase);
        si += std::sin(phase);
    }
    *re = sr;
    *im = si;
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {s_row_or2, s_row_or3, s_row_and2, s_row_and3,
                              s_popcount, s_sum_exp, "scalar"};
    return k;
}

namespace {
std::atomic<bool> g_force_scalar{false};

bool cpu_has_avx2() {
#if defined(DPV_KERN_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
} // namespace

void force_scalar(bool on) { g_force_scalar.store(on); }

const Kernels& kernels() {
#if defined(DPV_KERN_AVX2)
    if (!g_force_scalar.load() && cpu_has_avx2()) return avx2_kernels();
#endif
    return scalar_kernels();
}

bool using_avx2() {
#if defined(DPV_KERN_AVX2)
    return !g_force_scalar.load() && cpu_has_avx2();
#else
    return false;
#endif
}

} // namespace dpv::kern
