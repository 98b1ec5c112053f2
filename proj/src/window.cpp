#include "dpv/window.hpp"

#include <cmath>
#include <optional>

namespace dpv {

const std::array<Box, 4>& dp_windows() {
    // Interval split [-1, tau-2, tau-1]: short part length 1/tau, long part 1.
    static const std::array<Box, 4> w = [] {
        ZTau m1{-1, 0}, tm2{-2, 1}, tm1{-1, 1};
        return std::array<Box, 4>{
            Box{m1, m1, tm2, tm2},   // type 0: short x short
            Box{tm2, m1, tm1, tm2},  // type 1: long x short
            Box{m1, tm2, tm2, tm1},  // type 2: short x long
            Box{tm2, tm2, tm1, tm1}, // type 3: long x long
        };
    }();
    return w;
}

double Shear::smaller_singular_value() const {
    double a = std::fabs(alpha.embed());
    return std::sqrt((a * a - a * std::sqrt(a * a + 4.0) + 2.0) / 2.0);
}

std::string Shear::str() const {
    if (is_identity()) return "identity";
    return std::string(upper ? "upper" : "lower") + " alpha=" + alpha.str();
}

const std::vector<Shear>& shear_candidates() {
    static const std::vector<Shear> cands = [] {
        std::vector<Shear> v;
        std::array<ZTau, 6> alphas = {ZTau::one(),     -ZTau::one(),     ZTau::tau(),
                                      -ZTau::tau(),    ZTau::tau_inv(),  -ZTau::tau_inv()};
        for (bool upper : {true, false})
            for (const ZTau& a : alphas) v.push_back({upper, a});
        return v;
    }();
    return cands;
}

std::array<ZTauVec2, 4> PolyWindows::t_star() const {
    Shear ss = shear.star();
    std::array<ZTauVec2, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = ss.apply(u[i]);
    return t;
}

std::array<ZTauVec2, 4> PolyWindows::t_direct() const {
    auto ts = t_star();
    std::array<ZTauVec2, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = ts[i].star(); // star is an involution
    return t;
}

std::array<ZTauVec2, 4> PolyWindows::vertices(int i) const {
    const Box& r = dp_windows()[i];
    Shear ss = shear.star();
    ZTauVec2 lo = r.lo() + u[i], hi = r.hi() + u[i];
    return {ss.apply(lo), ss.apply({hi.x, lo.y}), ss.apply(hi), ss.apply({lo.x, hi.y})};
}

Mem PolyWindows::classify(int type, const ZTauVec2& xstar) const {
    Shear inv = shear.star().inverse();
    ZTauVec2 p = inv.apply(xstar) - u[type];
    const Box& r = dp_windows()[type];
    int sx0 = (p.x - r.x0).sign(), sx1 = (r.x1 - p.x).sign();
    int sy0 = (p.y - r.y0).sign(), sy1 = (r.y1 - p.y).sign();
    if (sx0 < 0 || sx1 < 0 || sy0 < 0 || sy1 < 0) return Mem::Out;
    if (sx0 > 0 && sx1 > 0 && sy0 > 0 && sy1 > 0) return Mem::In;
    return Mem::Uncertain; // exactly on the boundary
}

bool verify_window_ifs_exact(const WindowIFS& ifs, const Shear& shear,
                             const std::array<ZTauVec2, 4>& u, std::string* why) {
    const auto& R = dp_windows();
    Shear inv_star = shear.star().inverse();
    ZTau sigma = ZTau::sigma();
    for (int i = 0; i < 4; ++i) {
        Box target = R[i].translated(u[i]);
        std::vector<Box> pieces;
        for (const WindowBranch& b : ifs.into[i])
            pieces.push_back(R[b.src].translated(u[b.src]).scaled(sigma).translated(inv_star.apply(b.t)));
        PartitionReport rep = verify_box_partition(target, pieces);
        if (!rep.ok) {
            if (why) *why = "type " + std::to_string(i) + ": " + rep.detail;
            return false;
        }
    }
    return true;
}

namespace {

struct Bounds2 {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    bool any = false;
    void add(double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
        any = true;
    }
};

// Unsheared bounding box of the cell corners of all set cells.
Bounds2 unsheared_bounds(const BitGrid& g, double h, const Shear& inv_star) {
    Bounds2 b;
    for (int y = 0; y < g.h; ++y) {
        const uint64_t* row = g.bits.data() + size_t(y) * g.wpr;
        for (size_t wi = 0; wi < g.wpr; ++wi) {
            uint64_t v = row[wi];
            while (v) {
                int bit = __builtin_ctzll(v);
                v &= v - 1;
                double cx = (g.ix0 + int(wi * 64) + bit) * h;
                double cy = (g.iy0 + y) * h;
                double ox, oy;
                for (int c = 0; c < 4; ++c) {
                    inv_star.apply_embedded(cx + (c & 1 ? h : 0.0), cy + (c & 2 ? h : 0.0), &ox, &oy);
                    b.add(ox, oy);
                }
            }
        }
    }
    return b;
}

std::optional<ZTau> snap_ztau(double v, double tol, bool* ambiguous) {
    ZTau best, second;
    double d1 = 1e300, d2 = 1e300;
    for (int a = -4; a <= 4; ++a) {
        for (int b = -4; b <= 4; ++b) {
            double d = std::fabs(v - (a + b * kTau));
            if (d < d1) {
                d2 = d1;
                second = best;
                d1 = d;
                best = {a, b};
            } else if (d < d2) {
                d2 = d;
                second = {a, b};
            }
        }
    }
    if (d1 > tol) return std::nullopt;
    if (d2 < 2 * tol) {
        *ambiguous = true;
        return std::nullopt;
    }
    return best;
}

struct FitAttempt {
    bool plausible = false;  // passed the fill/dimension prefilter
    bool ambiguous = false;
    std::optional<PolyWindows> verified;
};

FitAttempt try_candidate(const WindowIFS& ifs, const WindowRaster& raster, const Shear& cand) {
    FitAttempt at;
    double h = raster.h();
    Shear inv_star = cand.star().inverse();
    const auto& R = dp_windows();

    std::array<Bounds2, 4> ib, ob;
    for (int i = 0; i < 4; ++i) {
        ib[i] = unsheared_bounds(raster.inner[i], h, inv_star);
        ob[i] = unsheared_bounds(raster.outer[i], h, inv_star);
        if (!ib[i].any) return at;
    }
    // prefilter: the unsheared inner set should fill an axis box of the
    // reference dimensions
    constexpr double kFillMin = 0.80;
    const double dim_tol = 0.08;
    for (int i = 0; i < 4; ++i) {
        double area = double(raster.inner[i].count()) * h * h;
        double barea = (ib[i].x1 - ib[i].x0) * (ib[i].y1 - ib[i].y0);
        if (barea <= 0 || area / barea < kFillMin) return at;
        double w_ref = R[i].width().embed(), h_ref = R[i].height().embed();
        double w_mid = ((ob[i].x1 + ib[i].x1) - (ob[i].x0 + ib[i].x0)) / 2;
        double h_mid = ((ob[i].y1 + ib[i].y1) - (ob[i].y0 + ib[i].y0)) / 2;
        if (std::fabs(w_mid - w_ref) > dim_tol || std::fabs(h_mid - h_ref) > dim_tol) return at;
    }
    at.plausible = true;

    // translation seeds: midpoint of the inner/outer boxes first, then the
    // one-sided boxes
    const double snap_tol = 0.024;
    for (int seed = 0; seed < 3; ++seed) {
        std::array<ZTauVec2, 4> u;
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) {
            double lx = seed == 0 ? (ib[i].x0 + ob[i].x0) / 2 : (seed == 1 ? ib[i].x0 : ob[i].x0);
            double ly = seed == 0 ? (ib[i].y0 + ob[i].y0) / 2 : (seed == 1 ? ib[i].y0 : ob[i].y0);
            bool amb = false;
            auto ux = snap_ztau(lx - R[i].x0.embed(), snap_tol, &amb);
            auto uy = snap_ztau(ly - R[i].y0.embed(), snap_tol, &amb);
            if (amb) at.ambiguous = true;
            if (!ux || !uy) {
                ok = false;
                break;
            }
            u[i] = {*ux, *uy};
        }
        if (!ok) continue;
        if (verify_window_ifs_exact(ifs, cand, u)) {
            at.verified = PolyWindows{ifs.rule, cand, u};
            return at;
        }
    }
    return at;
}

std::vector<Shear> all_candidates() {
    std::vector<Shear> v;
    v.push_back({true, ZTau::zero()}); // identity
    for (const Shear& s : shear_candidates()) v.push_back(s);
    return v;
}

} // namespace

CertifyOutcome certify_polygonal_window(const WindowIFS& ifs, const WindowRaster& raster) {
    if (raster.k < 8)
        return CertifyFailure{false, "raster resolution k >= 8 required"};
    bool saw_ambiguous = false;
    for (const Shear& cand : all_candidates()) {
        FitAttempt at = try_candidate(ifs, raster, cand);
        if (at.verified) return *at.verified;
        saw_ambiguous = saw_ambiguous || at.ambiguous;
    }
    if (saw_ambiguous)
        return CertifyFailure{true, "lattice snap ambiguous for a plausible shear candidate"};
    return CertifyFailure{false, "no shear candidate verifies; window is not polygonal"};
}

std::vector<PolyWindows> all_certified_shears(const WindowIFS& ifs, const WindowRaster& raster) {
    std::vector<PolyWindows> out;
    for (const Shear& cand : all_candidates()) {
        FitAttempt at = try_candidate(ifs, raster, cand);
        if (at.verified) out.push_back(*at.verified);
    }
    return out;
}

ShearedPrototiles sheared_prototiles(const Shear& s) {
    ShearedPrototiles out;
    out.shear = s;
    for (int i = 0; i < 4; ++i) {
        Box t = tile_box(i, {ZTau::zero(), ZTau::zero()});
        out.corners[i] = {s.apply(t.lo()), s.apply({t.x1, t.y0}), s.apply(t.hi()),
                          s.apply({t.x0, t.y1})};
    }
    // The sheared adjoint equations P_p = U tau^-1 P_j + S(tau^-1 o) unshear
    // to the plain tile equations, which are verified exactly as rectangle
    // partitions.
    Decomposition dec = build_rule({0, 0, 0});
    ZTau tinv = ZTau::tau_inv();
    out.adjoint_verified = true;
    for (int p = 0; p < 4 && out.adjoint_verified; ++p) {
        Box target = tile_box(p, {ZTau::zero(), ZTau::zero()});
        std::vector<Box> pieces;
        for (const ChildPlacement& ch : dec.parent[p])
            pieces.push_back(
                tile_box(ch.type, {ZTau::zero(), ZTau::zero()}).scaled(tinv).translated(tinv * ch.offset));
        PartitionReport rep = verify_box_partition(target, pieces);
        if (!rep.ok) {
            out.adjoint_verified = false;
            out.detail = "parent " + std::to_string(p) + ": " + rep.detail;
        }
    }
    return out;
}

} // namespace dpv
