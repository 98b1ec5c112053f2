#pragma once

#include <cstddef>
#include <cstdint>

namespace dpv::kern {

// Data-parallel inner loops used by the raster engine and the diffraction
// sums. Scalar reference kernels are always available; AVX2 variants are
// selected at runtime on capable CPUs and are equivalence-tested against
// the scalar versions.

struct Kernels {
    /// dst[i] = a[i] | b[i]
    void (*row_or2)(const uint64_t* a, const uint64_t* b, uint64_t* dst, size_t n);
    /// dst[i] = a[i] | b[i] | c[i]
    void (*row_or3)(const uint64_t* a, const uint64_t* b, const uint64_t* c, uint64_t* dst,
                    size_t n);
    /// dst[i] = a[i] & b[i]
    void (*row_and2)(const uint64_t* a, const uint64_t* b, uint64_t* dst, size_t n);
    /// dst[i] = a[i] & b[i] & c[i]
    void (*row_and3)(const uint64_t* a, const uint64_t* b, const uint64_t* c, uint64_t* dst,
                     size_t n);
    /// total popcount of n words
    uint64_t (*popcount)(const uint64_t* w, size_t n);
    /// sum of exp(-2*pi*i*(kx*x[j] + ky*y[j])) over j < n
    void (*sum_exp)(const double* x, const double* y, size_t n, double kx, double ky,
                    double* re, double* im);

    const char* name;
};

/// Kernels picked for this process (AVX2 when supported, else scalar).
const Kernels& kernels();
/// The scalar reference set.
const Kernels& scalar_kernels();
#ifdef DPV_KERN_AVX2
const Kernels& avx2_kernels();
#endif
/// True when the dispatched set is the AVX2 one.
bool using_avx2();
/// Test hook: force the scalar set for this process.
void force_scalar(bool on);

} // namespace dpv::kern
