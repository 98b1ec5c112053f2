#include "dpv/raster.hpp"

#include "dpv/kern.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace dpv {

WindowIFS window_ifs(const RuleId& id) {
    Decomposition dec = build_rule(id);
    WindowIFS ifs;
    ifs.rule = id;
    for (int p = 0; p < 4; ++p)
        for (const ChildPlacement& ch : dec.parent[p]) ifs.into[ch.type].push_back({p, ch.offset.star()});
    // Branches with large source windows first: the per-cell tests exit on
    // the first hit, and type 3 has the biggest window.
    for (auto& v : ifs.into)
        std::stable_sort(v.begin(), v.end(),
                         [](const WindowBranch& a, const WindowBranch& b) { return a.src > b.src; });
    return ifs;
}

void BitGrid::reset(int ix0_, int iy0_, int w_, int h_) {
    ix0 = ix0_;
    iy0 = iy0_;
    w = w_;
    h = h_;
    wpr = size_t((w + 63) / 64);
    bits.assign(wpr * size_t(h), 0);
}

uint64_t BitGrid::count() const { return kern::kernels().popcount(bits.data(), bits.size()); }

uint64_t BitGrid::edge_count() const {
    uint64_t total = 0;
    std::vector<uint64_t> zero(wpr, 0);
    for (int y = 0; y < h; ++y) {
        const uint64_t* cur = bits.data() + size_t(y) * wpr;
        const uint64_t* up = y + 1 < h ? cur + wpr : zero.data();
        const uint64_t* dn = y > 0 ? cur - wpr : zero.data();
        for (size_t wi = 0; wi < wpr; ++wi) {
            uint64_t c = cur[wi];
            if (!c) continue;
            uint64_t ln = (c << 1) | (wi > 0 ? cur[wi - 1] >> 63 : 0);
            uint64_t rn = (c >> 1) | (wi + 1 < wpr ? cur[wi + 1] << 63 : 0);
            uint64_t interior = up[wi] & dn[wi] & ln & rn;
            total += (uint64_t)__builtin_popcountll(c & ~interior);
        }
    }
    return total;
}

bool BitGrid::tight_bounds(int* gx0, int* gy0, int* gx1, int* gy1) const {
    int x0 = w, x1 = -1, y0 = h, y1 = -1;
    for (int y = 0; y < h; ++y) {
        const uint64_t* r = bits.data() + size_t(y) * wpr;
        int lo = -1, hi = -1;
        for (size_t wi = 0; wi < wpr; ++wi) {
            if (r[wi]) {
                lo = int(wi * 64) + __builtin_ctzll(r[wi]);
                break;
            }
        }
        if (lo < 0) continue;
        for (size_t wi = wpr; wi-- > 0;) {
            if (r[wi]) {
                hi = int(wi * 64) + 63 - __builtin_clzll(r[wi]);
                break;
            }
        }
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
        x0 = std::min(x0, lo);
        x1 = std::max(x1, hi);
    }
    if (y1 < 0) return false;
    *gx0 = ix0 + x0;
    *gy0 = iy0 + y0;
    *gx1 = ix0 + x1;
    *gy1 = iy0 + y1;
    return true;
}

double LevelStats::h() const { return std::ldexp(1.0, -k); }
double LevelStats::area(int i) const {
    double hh = h();
    return (double(type[i].inner) + 0.5 * double(type[i].outer - type[i].inner)) * hh * hh;
}
double LevelStats::area_total() const { return area(0) + area(1) + area(2) + area(3); }
uint64_t LevelStats::edge_total() const {
    return type[0].edge + type[1].edge + type[2].edge + type[3].edge;
}

double WindowRaster::h() const { return std::ldexp(1.0, -k); }

std::array<double, 4> WindowRaster::area_estimates() const {
    std::array<double, 4> a{};
    double hh = h();
    for (int i = 0; i < 4; ++i) {
        double o = double(outer[i].count()), in = double(inner[i].count());
        a[i] = (in + 0.5 * (o - in)) * hh * hh;
    }
    return a;
}

double WindowRaster::area_total() const {
    auto a = area_estimates();
    return a[0] + a[1] + a[2] + a[3];
}

const LevelStats* WindowRaster::level(int k_query) const {
    for (const LevelStats& s : profile)
        if (s.k == k_query) return &s;
    return nullptr;
}

namespace {

constexpr double kSeedExtent = 2.75; // covers the attractor bound 1/(1-|sigma|) = tau^2
constexpr double kEpsCells = 1e-6;

struct BranchK {
    int src;
    double tx, ty; // branch translation in cell units at the current level
};

inline bool any_set_range(const uint64_t* buf, int lo, int hi) {
    int wl = lo >> 6, wh = hi >> 6;
    uint64_t ml = ~uint64_t(0) << (lo & 63);
    uint64_t mh = (hi & 63) == 63 ? ~uint64_t(0) : ((uint64_t(1) << ((hi & 63) + 1)) - 1);
    if (wl == wh) return (buf[wl] & ml & mh) != 0;
    if (buf[wl] & ml) return true;
    for (int t = wl + 1; t < wh; ++t)
        if (buf[t]) return true;
    return (buf[wh] & mh) != 0;
}

inline bool all_set_range(const uint64_t* buf, int lo, int hi) {
    int wl = lo >> 6, wh = hi >> 6;
    uint64_t ml = ~uint64_t(0) << (lo & 63);
    uint64_t mh = (hi & 63) == 63 ? ~uint64_t(0) : ((uint64_t(1) << ((hi & 63) + 1)) - 1);
    if (wl == wh) {
        uint64_t m = ml & mh;
        return (buf[wl] & m) == m;
    }
    if ((buf[wl] & ml) != ml) return false;
    for (int t = wl + 1; t < wh; ++t)
        if (buf[t] != ~uint64_t(0)) return false;
    return (buf[wh] & mh) == mh;
}

BitGrid upsample(const BitGrid& g) {
    static const auto lut = [] {
        std::array<uint16_t, 256> t{};
        for (int b = 0; b < 256; ++b) {
            uint16_t r = 0;
            for (int i = 0; i < 8; ++i)
                if (b & (1 << i)) r |= uint16_t(3) << (2 * i);
            t[b] = r;
        }
        return t;
    }();
    BitGrid u;
    u.reset(g.ix0 * 2, g.iy0 * 2, g.w * 2, g.h * 2);
    for (int y = 0; y < g.h; ++y) {
        const uint64_t* src = g.bits.data() + size_t(y) * g.wpr;
        uint64_t* d0 = u.bits.data() + size_t(2 * y) * u.wpr;
        uint64_t* d1 = d0 + u.wpr;
        for (size_t wi = 0; wi < g.wpr; ++wi) {
            uint64_t v = src[wi];
            if (!v) continue;
            uint64_t lo = 0, hi = 0;
            for (int byte = 0; byte < 4; ++byte)
                lo |= uint64_t(lut[(v >> (8 * byte)) & 0xff]) << (16 * byte);
            for (int byte = 4; byte < 8; ++byte)
                hi |= uint64_t(lut[(v >> (8 * byte)) & 0xff]) << (16 * (byte - 4));
            size_t o = 2 * wi;
            if (o < u.wpr) {
                d0[o] |= lo;
                d1[o] |= lo;
            }
            if (o + 1 < u.wpr) {
                d0[o + 1] |= hi;
                d1[o + 1] |= hi;
            }
        }
    }
    return u;
}

// Copies n bits starting at src bit sbit into dst starting at dbit.
// dst bits must be zero beforehand.
void copy_bits(const uint64_t* src, int sbit, int n, uint64_t* dst, int dbit) {
    while (n > 0) {
        int dw = dbit >> 6, doff = dbit & 63;
        int chunk = std::min(64 - doff, n);
        int sw = sbit >> 6, soff = sbit & 63;
        uint64_t v = src[sw] >> soff;
        if (soff && soff + chunk > 64) v |= src[sw + 1] << (64 - soff);
        uint64_t mask = chunk == 64 ? ~uint64_t(0) : ((uint64_t(1) << chunk) - 1);
        dst[dw] |= (v & mask) << doff;
        sbit += chunk;
        dbit += chunk;
        n -= chunk;
    }
}

// Rebuilds g into the given frame, keeping the set bits that fit.
BitGrid reframe(const BitGrid& g, int ix0, int iy0, int w, int h) {
    BitGrid r;
    r.reset(ix0, iy0, w, h);
    int y0 = std::max(g.iy0, iy0), y1 = std::min(g.iy0 + g.h, iy0 + h);
    int x0 = std::max(g.ix0, ix0), x1 = std::min(g.ix0 + g.w, ix0 + w);
    if (x0 >= x1) return r;
    for (int gy = y0; gy < y1; ++gy)
        copy_bits(g.row(gy), x0 - g.ix0, x1 - x0, r.row(gy), x0 - ix0);
    return r;
}

BitGrid downsample(const BitGrid& g0, int e, bool all_mode) {
    int f = 1 << e;
    auto fdiv = [f](int v) { return v >= 0 ? v / f : -((-v + f - 1) / f); };
    int x0 = fdiv(g0.ix0), y0 = fdiv(g0.iy0);
    int x1 = fdiv(g0.ix0 + g0.w - 1), y1 = fdiv(g0.iy0 + g0.h - 1);
    int ow = x1 - x0 + 1, oh = y1 - y0 + 1;
    // f-aligned padded copy so bit folding lines up with block boundaries
    BitGrid g = reframe(g0, x0 * f, y0 * f, ow * f, oh * f);
    BitGrid d;
    d.reset(x0, y0, ow, oh);
    std::vector<uint64_t> temp(g.wpr);
    uint64_t fmask = f == 64 ? ~uint64_t(0) : ((uint64_t(1) << f) - 1);
    for (int oy = 0; oy < oh; ++oy) {
        const uint64_t* r0 = g.bits.data() + size_t(oy) * f * g.wpr;
        for (size_t wi = 0; wi < g.wpr; ++wi) {
            uint64_t acc = r0[wi];
            for (int s = 1; s < f; ++s) {
                uint64_t v = r0[wi + size_t(s) * g.wpr];
                acc = all_mode ? (acc & v) : (acc | v);
            }
            temp[wi] = acc;
        }
        uint64_t* orow = d.bits.data() + size_t(oy) * d.wpr;
        for (size_t wi = 0; wi < g.wpr; ++wi) {
            uint64_t t = temp[wi];
            if (!all_mode && !t) continue;
            int per = 64 / f; // out bits per temp word
            for (int j = 0; j < per; ++j) {
                uint64_t chunk = (t >> (j * f)) & fmask;
                bool bit = all_mode ? chunk == fmask : chunk != 0;
                if (bit) {
                    int ob = int(wi) * per + j;
                    if (ob < d.w) orow[ob >> 6] |= uint64_t(1) << (ob & 63);
                }
            }
        }
    }
    return d;
}

bool grids_equal(const BitGrid& a, const BitGrid& b) {
    if (a.ix0 != b.ix0 || a.iy0 != b.iy0 || a.w != b.w || a.h != b.h) return false;
    return a.bits == b.bits;
}

struct LevelGeom {
    int k;
    std::array<std::vector<BranchK>, 4> into;
    int seed_lo, seed_hi; // global cell bounds of the seed box

    LevelGeom(const WindowIFS& ifs, int k_) : k(k_) {
        double scale = std::ldexp(1.0, k);
        for (int i = 0; i < 4; ++i)
            for (const WindowBranch& b : ifs.into[i])
                into[i].push_back({b.src, kTau * b.t.x.embed() * scale, kTau * b.t.y.embed() * scale});
        seed_lo = (int)std::floor(-kSeedExtent * scale);
        seed_hi = (int)std::ceil(kSeedExtent * scale);
    }
};

// Frame of the Hutchinson image of the current outer grids, per target type.
void image_frame(const LevelGeom& geo, const std::array<BitGrid, 4>& src, int i, int* fx0, int* fy0,
                 int* fw, int* fh) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const BranchK& b : geo.into[i]) {
        const BitGrid& s = src[b.src];
        double sx0 = s.ix0, sx1 = s.ix0 + s.w, sy0 = s.iy0, sy1 = s.iy0 + s.h;
        // image x-interval: sigma*[sx0, sx1] + t, sigma < 0 flips; in cell
        // units the map is x -> sigma*x + t_cells with t_cells = tx/tau*...
        // Here tx already stores tau*t, so preimage math uses it directly;
        // the forward image is (t - x_pre)/tau ... simpler: image of u is
        // sigma*u + t where t = tx/tau.
        double tx = b.tx / kTau, ty = b.ty / kTau;
        x0 = std::min(x0, kSigma * sx1 + tx);
        x1 = std::max(x1, kSigma * sx0 + tx);
        y0 = std::min(y0, kSigma * sy1 + ty);
        y1 = std::max(y1, kSigma * sy0 + ty);
    }
    int ix0 = std::max((int)std::floor(x0) - 1, geo.seed_lo);
    int ix1 = std::min((int)std::ceil(x1) + 1, geo.seed_hi);
    int iy0 = std::max((int)std::floor(y0) - 1, geo.seed_lo);
    int iy1 = std::min((int)std::ceil(y1) + 1, geo.seed_hi);
    *fx0 = ix0;
    *fy0 = iy0;
    *fw = std::max(ix1 - ix0, 1);
    *fh = std::max(iy1 - iy0, 1);
}

// One Hutchinson pass with outward rounding: dst cell is set when any branch
// image of the source region meets it.
void outer_pass(const LevelGeom& geo, const std::array<BitGrid, 4>& src, std::array<BitGrid, 4>& dst) {
    size_t maxw = 0;
    for (const BitGrid& g : src) maxw = std::max(maxw, g.wpr);
    std::vector<uint64_t> scratch;
    for (int i = 0; i < 4; ++i) {
        int fx0, fy0, fw, fh;
        image_frame(geo, src, i, &fx0, &fy0, &fw, &fh);
        dst[i].reset(fx0, fy0, fw, fh);
        const auto& branches = geo.into[i];
        size_t nb = branches.size();
        scratch.assign(nb * (maxw + 2), 0);
        std::vector<const uint64_t*> buf(nb);
        std::vector<char> alive(nb);
        for (int iy = fy0; iy < fy0 + fh; ++iy) {
            // combine the source rows seen by each branch on this target row
            for (size_t bi = 0; bi < nb; ++bi) {
                const BranchK& b = branches[bi];
                const BitGrid& s = src[b.src];
                double py_hi = b.ty - kTau * iy;
                double py_lo = py_hi - kTau;
                int jy0 = (int)std::floor(py_lo - kEpsCells);
                int jy1 = (int)std::floor(py_hi + kEpsCells);
                if (jy1 - jy0 > 2) throw std::logic_error("outer_pass: preimage spans > 3 rows");
                uint64_t* out = scratch.data() + bi * (maxw + 2);
                const uint64_t* rows[3];
                int nrows = 0;
                for (int jy = jy0; jy <= jy1; ++jy)
                    if (jy >= s.iy0 && jy < s.iy0 + s.h) rows[nrows++] = s.row(jy);
                alive[bi] = nrows > 0;
                buf[bi] = out;
                if (nrows == 1) {
                    buf[bi] = rows[0];
                } else if (nrows == 2) {
                    kern::kernels().row_or2(rows[0], rows[1], out, s.wpr);
                } else if (nrows == 3) {
                    kern::kernels().row_or3(rows[0], rows[1], rows[2], out, s.wpr);
                }
            }
            uint64_t* drow = dst[i].row(iy);
            for (size_t wi = 0; wi < dst[i].wpr; ++wi) {
                uint64_t acc = 0;
                int base = fx0 + int(wi * 64);
                int nbits = std::min(64, fw - int(wi * 64));
                for (int bit = 0; bit < nbits; ++bit) {
                    int ix = base + bit;
                    for (size_t bi = 0; bi < nb; ++bi) {
                        if (!alive[bi]) continue;
                        const BranchK& b = branches[bi];
                        const BitGrid& s = src[b.src];
                        double px_hi = b.tx - kTau * ix;
                        int jl = (int)std::floor(px_hi - kTau - kEpsCells) - s.ix0;
                        int jh = (int)std::floor(px_hi + kEpsCells) - s.ix0;
                        jl = std::max(jl, 0);
                        jh = std::min(jh, s.w - 1);
                        if (jl > jh) continue;
                        if (any_set_range(buf[bi], jl, jh)) {
                            acc |= uint64_t(1) << bit;
                            break;
                        }
                    }
                }
                drow[wi] = acc;
            }
        }
    }
}

// Certification of one cell: every one of its four half-resolution subcells
// must be covered by a single branch image of the inner region. Buffers hold
// the AND of the 1-2 source rows seen by each (branch, y-subcell) pair;
// nullptr marks a pair with no valid rows.
struct CertRow {
    std::array<const uint64_t*, 8> buf{}; // [branch*2 + sy]
    const std::vector<BranchK>* branches = nullptr;
    const std::array<BitGrid, 4>* inner = nullptr;

    bool certify(int ix) const {
        const auto& bl = *branches;
        for (int sy = 0; sy < 2; ++sy) {
            for (int sx = 0; sx < 2; ++sx) {
                bool ok = false;
                for (size_t bi = 0; bi < bl.size() && !ok; ++bi) {
                    const uint64_t* b = buf[bi * 2 + sy];
                    if (!b) continue;
                    const BranchK& br = bl[bi];
                    const BitGrid& s = (*inner)[br.src];
                    double px_hi = br.tx - kTau * (ix + 0.5 * sx);
                    double px_lo = px_hi - 0.5 * kTau;
                    int jl = (int)std::floor(px_lo - kEpsCells) - s.ix0;
                    int jh = (int)std::floor(px_hi + kEpsCells) - s.ix0;
                    if (jl < 0 || jh >= s.w) continue;
                    ok = all_set_range(b, jl, jh);
                }
                if (!ok) return false;
            }
        }
        return true;
    }
};

class InnerPass {
  public:
    InnerPass(const LevelGeom& geo, std::array<BitGrid, 4>& inner) : geo_(geo), inner_(inner) {
        size_t maxw = 0;
        for (const BitGrid& g : inner) maxw = std::max(maxw, g.wpr);
        stride_ = maxw + 2;
        scratch_.assign(8 * stride_, 0);
    }

    // Prepares AND-buffers for row iy of target type i.
    CertRow rowprep(int i, int iy) {
        CertRow cr;
        cr.branches = &geo_.into[i];
        cr.inner = &inner_;
        const auto& branches = geo_.into[i];
        for (size_t bi = 0; bi < branches.size(); ++bi) {
            const BranchK& b = branches[bi];
            const BitGrid& s = inner_[b.src];
            for (int sy = 0; sy < 2; ++sy) {
                double py_hi = b.ty - kTau * (iy + 0.5 * sy);
                double py_lo = py_hi - 0.5 * kTau;
                int jy0 = (int)std::floor(py_lo - kEpsCells);
                int jy1 = (int)std::floor(py_hi + kEpsCells);
                const uint64_t* rows[3];
                int nrows = 0;
                bool valid = jy1 - jy0 <= 2;
                for (int jy = jy0; valid && jy <= jy1; ++jy) {
                    if (jy < s.iy0 || jy >= s.iy0 + s.h) {
                        valid = false;
                        break;
                    }
                    rows[nrows++] = s.row(jy);
                }
                if (!valid || nrows == 0) {
                    cr.buf[bi * 2 + sy] = nullptr;
                    continue;
                }
                if (nrows == 1) {
                    cr.buf[bi * 2 + sy] = rows[0];
                } else {
                    uint64_t* out = scratch_.data() + (bi * 2 + sy) * stride_;
                    if (nrows == 2)
                        kern::kernels().row_and2(rows[0], rows[1], out, s.wpr);
                    else
                        kern::kernels().row_and3(rows[0], rows[1], rows[2], out, s.wpr);
                    cr.buf[bi * 2 + sy] = out;
                }
            }
        }
        return cr;
    }

  private:
    const LevelGeom& geo_;
    std::array<BitGrid, 4>& inner_;
    size_t stride_ = 0;
    std::vector<uint64_t> scratch_;
};

// Adds certifiable cells from outer\inner. Returns true when cells were added.
bool inner_grow_pass(const LevelGeom& geo, const std::array<BitGrid, 4>& outer,
                     std::array<BitGrid, 4>& inner) {
    bool changed = false;
    InnerPass ip(geo, inner);
    for (int i = 0; i < 4; ++i) {
        BitGrid& in = inner[i];
        const BitGrid& out = outer[i];
        for (int iy = in.iy0; iy < in.iy0 + in.h; ++iy) {
            const uint64_t* orow = out.row(iy);
            uint64_t* irow = in.row(iy);
            bool have = false;
            for (size_t wi = 0; wi < in.wpr; ++wi)
                if (orow[wi] & ~irow[wi]) {
                    have = true;
                    break;
                }
            if (!have) continue;
            CertRow cr = ip.rowprep(i, iy);
            for (size_t wi = 0; wi < in.wpr; ++wi) {
                uint64_t cand = orow[wi] & ~irow[wi];
                while (cand) {
                    int bit = __builtin_ctzll(cand);
                    cand &= cand - 1;
                    int ix = in.ix0 + int(wi * 64) + bit;
                    if (cr.certify(ix)) {
                        irow[wi] |= uint64_t(1) << bit;
                        changed = true;
                    }
                }
            }
        }
    }
    return changed;
}

// Removes cells of inner that fail certification. Returns true when changed.
bool inner_prune_pass(const LevelGeom& geo, std::array<BitGrid, 4>& inner) {
    bool changed = false;
    InnerPass ip(geo, inner);
    for (int i = 0; i < 4; ++i) {
        BitGrid& in = inner[i];
        for (int iy = in.iy0; iy < in.iy0 + in.h; ++iy) {
            uint64_t* irow = in.row(iy);
            bool have = false;
            for (size_t wi = 0; wi < in.wpr; ++wi)
                if (irow[wi]) {
                    have = true;
                    break;
                }
            if (!have) continue;
            CertRow cr = ip.rowprep(i, iy);
            for (size_t wi = 0; wi < in.wpr; ++wi) {
                uint64_t cand = irow[wi];
                while (cand) {
                    int bit = __builtin_ctzll(cand);
                    cand &= cand - 1;
                    int ix = in.ix0 + int(wi * 64) + bit;
                    if (!cr.certify(ix)) {
                        irow[wi] &= ~(uint64_t(1) << bit);
                        changed = true;
                    }
                }
            }
        }
    }
    return changed;
}

// Rebuilds g into the given frame, keeping set bits (which must fit).
BitGrid reframe(const BitGrid& g, int ix0, int iy0, int w, int h) {
    BitGrid r;
    r.reset(ix0, iy0, w, h);
    int y0 = std::max(g.iy0, iy0), y1 = std::min(g.iy0 + g.h, iy0 + h);
    int x0 = std::max(g.ix0, ix0), x1 = std::min(g.ix0 + g.w, ix0 + w);
    for (int gy = y0; gy < y1; ++gy)
        for (int gx = x0; gx < x1; ++gx)
            if (g.get(gx, gy)) r.set(gx, gy);
    return r;
}

uint64_t total_count(const std::array<BitGrid, 4>& grids) {
    uint64_t n = 0;
    for (const BitGrid& g : grids) n += g.count();
    return n;
}

} // namespace

WindowRaster attractor_raster(const WindowIFS& ifs, const RasterOptions& opt) {
    WindowRaster R;
    R.rule = ifs.rule;
    R.k = opt.k;
    int k_top = opt.k + std::max(opt.internal_extra, 0);
    R.k_internal = k_top;
    int k0 = std::min(opt.seed_k, opt.k);

    std::array<BitGrid, 4> outer, inner;
    {
        double scale = std::ldexp(1.0, k0);
        int lo = (int)std::floor(-kSeedExtent * scale), hi = (int)std::ceil(kSeedExtent * scale);
        for (int i = 0; i < 4; ++i) {
            outer[i].reset(lo, lo, hi - lo, hi - lo);
            for (int y = 0; y < outer[i].h; ++y) {
                uint64_t* r = outer[i].bits.data() + size_t(y) * outer[i].wpr;
                for (size_t wi = 0; wi < outer[i].wpr; ++wi) r[wi] = ~uint64_t(0);
                int tail = outer[i].w & 63;
                if (tail) r[outer[i].wpr - 1] = (uint64_t(1) << tail) - 1;
            }
            inner[i].reset(lo, lo, hi - lo, hi - lo);
        }
    }

    for (int k = k0; k <= k_top; ++k) {
        LevelGeom geo(ifs, k);
        if (k > k0) {
            for (int i = 0; i < 4; ++i) {
                outer[i] = upsample(outer[i]);
                inner[i] = upsample(inner[i]);
            }
        }
        // Outer Hutchinson iteration with outward rounding.
        bool converged = false;
        int passes = k == k0 ? std::max(opt.max_outer_passes, 24) : opt.max_outer_passes;
        for (int p = 0; p < passes; ++p) {
            std::array<BitGrid, 4> next;
            outer_pass(geo, outer, next);
            bool same = true;
            for (int i = 0; i < 4 && same; ++i) same = grids_equal(outer[i], next[i]);
            outer = std::move(next);
            if (same) {
                converged = true;
                break;
            }
        }
        // Inner certification: prune from the outer set until it first becomes
        // nonempty, afterwards grow the upsampled certified set.
        if (total_count(inner) == 0) {
            for (int i = 0; i < 4; ++i) inner[i] = outer[i];
            for (int p = 0; p < opt.max_prune_passes; ++p)
                if (!inner_prune_pass(geo, inner)) break;
        } else {
            for (int i = 0; i < 4; ++i)
                inner[i] = reframe(inner[i], outer[i].ix0, outer[i].iy0, outer[i].w, outer[i].h);
            for (int p = 0; p < opt.max_grow_passes; ++p)
                if (!inner_grow_pass(geo, outer, inner)) break;
        }
        // Shrink-wrap to the outer content and align the inner frame to it.
        for (int i = 0; i < 4; ++i) {
            int x0, y0, x1, y1;
            if (outer[i].tight_bounds(&x0, &y0, &x1, &y1)) {
                outer[i] = reframe(outer[i], x0, y0, x1 - x0 + 1, y1 - y0 + 1);
                inner[i] = reframe(inner[i], x0, y0, x1 - x0 + 1, y1 - y0 + 1);
            }
        }
        LevelStats ls;
        ls.k = k;
        ls.outer_converged = converged;
        for (int i = 0; i < 4; ++i) {
            ls.type[i].outer = outer[i].count();
            ls.type[i].inner = inner[i].count();
            ls.type[i].edge = outer[i].edge_count();
        }
        R.profile.push_back(ls);
    }

    int extra = k_top - opt.k;
    for (int i = 0; i < 4; ++i) {
        if (extra > 0) {
            R.outer[i] = downsample(outer[i], extra, false);
            R.inner[i] = downsample(inner[i], extra, true);
            R.inner[i] = reframe(R.inner[i], R.outer[i].ix0, R.outer[i].iy0, R.outer[i].w, R.outer[i].h);
        } else {
            R.outer[i] = std::move(outer[i]);
            R.inner[i] = std::move(inner[i]);
        }
    }
    return R;
}

Mem raster_classify(const WindowRaster& r, int type, double sx, double sy) {
    double inv_h = std::ldexp(1.0, r.k);
    double fx = sx * inv_h, fy = sy * inv_h;
    int cx = (int)std::floor(fx), cy = (int)std::floor(fy);
    const BitGrid& O = r.outer[type];
    const BitGrid& I = r.inner[type];
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (O.get(cx + dx, cy + dy) && !I.get(cx + dx, cy + dy)) return Mem::Uncertain;
    // no Boundary cells nearby; cells touching the point must agree
    constexpr double eps = 1e-7;
    int xlo = fx - cx < eps ? cx - 1 : cx, xhi = cx + 1 - fx < eps ? cx + 1 : cx;
    int ylo = fy - cy < eps ? cy - 1 : cy, yhi = cy + 1 - fy < eps ? cy + 1 : cy;
    bool all_in = true, all_out = true;
    for (int gy = ylo; gy <= yhi; ++gy) {
        for (int gx = xlo; gx <= xhi; ++gx) {
            if (I.get(gx, gy))
                all_out = false;
            else
                all_in = false;
        }
    }
    if (all_in) return Mem::In;
    if (all_out) return Mem::Out;
    return Mem::Uncertain;
}

} // namespace dpv
