// AVX2 kernel variants. Compiled with -mavx2 -mfma in this TU only; callers
// go through kern::kernels() which checks CPU support at runtime.

#include "dpv/kern.hpp"

#include <immintrin.h>

namespace dpv::kern {

namespace {

void v_row_or2(const uint64_t* a, const uint64_t* b, uint64_t* dst, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256((const __m256i*)(a + i));
        __m256i vb = _mm256_loadu_si256((const __m256i*)(b + i));
        _mm256_storeu_si256((__m256i*)(dst + i), _mm256_or_si256(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] | b[i];
}

void v_row_or3(const uint64_t* a, const uint64_t* b, const uint64_t* c, uint64_t* dst, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256((const __m256i*)(a + i));
        __m256i vb = _mm256_loadu_si256((const __m256i*)(b + i));
        __m256i vc = _mm256_loadu_si256((const __m256i*)(c + i));
        _mm256_storeu_si256((__m256i*)(dst + i), _mm256_or_si256(_mm256_or_si256(va, vb), vc));
    }
    for (; i < n; ++i) dst[i] = a[i] | b[i] | c[i];
}

void v_row_and2(const uint64_t* a, const uint64_t* b, uint64_t* dst, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256((const __m256i*)(a + i));
        __m256i vb = _mm256_loadu_si256((const __m256i*)(b + i));
        _mm256_storeu_si256((__m256i*)(dst + i), _mm256_and_si256(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] & b[i];
}

void v_row_and3(const uint64_t* a, const uint64_t* b, const uint64_t* c, uint64_t* dst, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256((const __m256i*)(a + i));
        __m256i vb = _mm256_loadu_si256((const __m256i*)(b + i));
        __m256i vc = _mm256_loadu_si256((const __m256i*)(c + i));
        _mm256_storeu_si256((__m256i*)(dst + i), _mm256_and_si256(_mm256_and_si256(va, vb), vc));
    }
    for (; i < n; ++i) dst[i] = a[i] & b[i] & c[i];
}

// nibble-LUT popcount, summed with psadbw
inline __m256i popcount256(__m256i v) {
    const __m256i lut =
        _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1,
                         2, 2, 3, 2, 3, 3, 4);
    const __m256i low = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

uint64_t v_popcount(const uint64_t* w, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_epi64(acc, popcount256(_mm256_loadu_si256((const __m256i*)(w + i))));
    }
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256((__m256i*)lanes, acc);
    uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) total += (uint64_t)__builtin_popcountll(w[i]);
    return total;
}

// sin/cos on four lanes: Cody-Waite reduction by pi/2 plus the usual
// degree-13/14 minimax kernels; adequate to ~1 ulp for |t| < 2^20.
inline void sincos4(__m256d t, __m256d* s_out, __m256d* c_out) {
    const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
    const __m256d pio2_hi = _mm256_set1_pd(1.57079632673412561417e+00);
    const __m256d pio2_lo = _mm256_set1_pd(6.07710050650619224932e-11);

    __m256d qd = _mm256_round_pd(_mm256_mul_pd(t, two_over_pi),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(qd, pio2_hi, t);
    r = _mm256_fnmadd_pd(qd, pio2_lo, r);
    __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
    __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
    __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

    // quadrant fixup: n = q mod 4 swaps/negates the pair
    __m128i q32 = _mm256_cvtpd_epi32(qd);
    __m256i q64 = _mm256_cvtepi32_epi64(q32);
    __m256i swap = _mm256_cmpeq_epi64(_mm256_and_si256(q64, _mm256_set1_epi64x(1)),
                                      _mm256_set1_epi64x(1));
    __m256i ssign = _mm256_slli_epi64(_mm256_and_si256(q64, _mm256_set1_epi64x(2)), 62);
    __m256i csign = _mm256_slli_epi64(
        _mm256_and_si256(_mm256_add_epi64(q64, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(2)), 62);

    __m256d sin_v = _mm256_blendv_pd(s, c, _mm256_castsi256_pd(swap));
    __m256d cos_v = _mm256_blendv_pd(c, s, _mm256_castsi256_pd(swap));
    sin_v = _mm256_xor_pd(sin_v, _mm256_castsi256_pd(ssign));
    cos_v = _mm256_xor_pd(cos_v, _mm256_castsi256_pd(csign));
    *s_out = sin_v;
    *c_out = cos_v;
}

void v_sum_exp(const double* x, const double* y, size_t n, double kx, double ky, double* re,
               double* im) {
    const __m256d vkx = _mm256_set1_pd(kx);
    const __m256d vky = _mm256_set1_pd(ky);
    const __m256d mtwo_pi = _mm256_set1_pd(-6.283185307179586476925286766559);
    __m256d sre = _mm256_setzero_pd(), sim = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d dot = _mm256_fmadd_pd(vkx, vx, _mm256_mul_pd(vky, vy));
        __m256d phase = _mm256_mul_pd(mtwo_pi, dot);
        __m256d s, c;
        sincos4(phase, &s, &c);
        sre = _mm256_add_pd(sre, c);
        sim = _mm256_add_pd(sim, s);
    }
    alignas(32) double lr[4], li[4];
    _mm256_store_pd(lr, sre);
    _mm256_store_pd(li, sim);
    double tr = lr[0] + lr[1] + lr[2] + lr[3];
    double ti = li[0] + li[1] + li[2] + li[3];
    if (i < n) {
        double rr, ri;
        scalar_kernels().sum_exp(x + i, y + i, n - i, kx, ky, &rr, &ri);
        tr += rr;
        ti += ri;
    }
    *re = tr;
    *im = ti;
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels k = {v_row_or2, v_row_or3, v_row_and2, v_row_and3,
                              v_popcount, v_sum_exp, "avx2"};
    return k;
}

} // namespace dpv::kern
