#pragma once

#include "dpv/rules.hpp"
#include "dpv/ztau.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dpv {

/// One contraction branch of a window IFS: Omega_target contains
/// sigma * Omega_src + t, with sigma = 1 - tau and t in Z[tau]^2.
struct WindowBranch {
    int src;
    ZTauVec2 t;

    friend bool operator==(const WindowBranch&, const WindowBranch&) = default;
};

/// Star image of a rule's matrix function system. Branch counts per target
/// type reproduce the rows (1, 2, 2, 4) of the substitution matrix.
struct WindowIFS {
    RuleId rule;
    std::array<std::vector<WindowBranch>, 4> into;

    size_t branch_count() const {
        size_t n = 0;
        for (const auto& v : into) n += v.size();
        return n;
    }
};

/// Builds the window IFS of a rule: each matrix-function-system branch
/// Lambda_i >= tau*Lambda_p + o turns into Omega_i >= sigma*Omega_p + o*.
WindowIFS window_ifs(const RuleId& id);

/// Dense bit grid over the global dyadic cells [ix*h, (ix+1)*h] x [iy*h, (iy+1)*h].
struct BitGrid {
    int ix0 = 0, iy0 = 0; // global index of local cell (0, 0)
    int w = 0, h = 0;
    size_t wpr = 0; // words per row
    std::vector<uint64_t> bits;

    void reset(int ix0_, int iy0_, int w_, int h_);
    bool inside(int gx, int gy) const {
        return gx >= ix0 && gx < ix0 + w && gy >= iy0 && gy < iy0 + h;
    }
    bool get(int gx, int gy) const {
        if (!inside(gx, gy)) return false;
        size_t lx = size_t(gx - ix0);
        return (row(gy)[lx >> 6] >> (lx & 63)) & 1;
    }
    void set(int gx, int gy) {
        size_t lx = size_t(gx - ix0);
        row(gy)[lx >> 6] |= uint64_t(1) << (lx & 63);
    }
    uint64_t* row(int gy) { return bits.data() + size_t(gy - iy0) * wpr; }
    const uint64_t* row(int gy) const { return bits.data() + size_t(gy - iy0) * wpr; }
    uint64_t count() const;
    /// Count of set cells having at least one unset 4-neighbour.
    uint64_t edge_count() const;
    /// Tight bounds of set bits; false when empty.
    bool tight_bounds(int* gx0, int* gy0, int* gx1, int* gy1) const;
};

struct TypeLevelStats {
    uint64_t outer = 0, inner = 0, edge = 0;
};

struct LevelStats {
    int k = 0;
    std::array<TypeLevelStats, 4> type;
    bool outer_converged = true;

    double h() const;
    /// Inside + half-boundary area estimate for one type.
    double area(int i) const;
    double area_total() const;
    uint64_t edge_total() const;
};

struct RasterOptions {
    int k = 8;              // resolution of the returned raster
    int internal_extra = 2; // extra pyramid levels used to certify the flags
    int seed_k = 4;         // coarsest pyramid level
    int max_outer_passes = 8;
    int max_grow_passes = 64;
    int max_prune_passes = 256;
};

/// Certified two-sided raster approximation of the window attractor.
/// `outer` covers every cell meeting the window; `inner` cells are proven
/// subsets of the window (Inside flag); outer-minus-inner is the Boundary
/// band. `profile` records per-level statistics along the pyramid.
struct WindowRaster {
    RuleId rule;
    int k = 0;
    int k_internal = 0;
    std::array<BitGrid, 4> outer, inner;
    std::vector<LevelStats> profile;

    double h() const;
    std::array<double, 4> area_estimates() const;
    double area_total() const;
    const LevelStats* level(int k_query) const;
};

WindowRaster attractor_raster(const WindowIFS& ifs, const RasterOptions& opt);

/// Three-way membership of a star-space point against one type of a raster,
/// with a one-cell exclusion band around Boundary cells.
enum class Mem { In, Out, Uncertain };
Mem raster_classify(const WindowRaster& r, int type, double sx, double sy);

} // namespace dpv
