#include "dpv/modelset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace dpv {

namespace {

ZTau int_scale(long long s, const ZTau& v) { return ZTau{s, 0} * v; }

// sign of (num/den - bound) with den > 0, num a scaled Z[tau] value
int cmp_scaled(const ZTau& num, long long den, const ZTau& bound) {
    return (num - int_scale(den, bound)).sign();
}

Mem poly_classify_exact_shift(const PolyWindows& p, int type, const ZTauVec2& xstar,
                              const Rational& sx, const Rational& sy) {
    // work over the common denominator q = sx.den * sy.den
    long long q = sx.den * sy.den;
    ZTau nx = int_scale(q, xstar.x) - ZTau{sx.num * sy.den, 0};
    ZTau ny = int_scale(q, xstar.y) - ZTau{sy.num * sx.den, 0};
    Shear inv = p.shear.star().inverse();
    ZTau px, py;
    if (inv.upper) {
        px = nx + inv.alpha * ny;
        py = ny;
    } else {
        px = nx;
        py = ny + inv.alpha * nx;
    }
    const Box& r = dp_windows()[type];
    ZTau lox = r.x0 + p.u[type].x, hix = r.x1 + p.u[type].x;
    ZTau loy = r.y0 + p.u[type].y, hiy = r.y1 + p.u[type].y;
    int sx0 = cmp_scaled(px, q, lox), sx1 = -cmp_scaled(px, q, hix);
    int sy0 = cmp_scaled(py, q, loy), sy1 = -cmp_scaled(py, q, hiy);
    if (sx0 < 0 || sx1 < 0 || sy0 < 0 || sy1 < 0) return Mem::Out;
    if (sx0 > 0 && sx1 > 0 && sy0 > 0 && sy1 > 0) return Mem::In;
    return Mem::Uncertain;
}

Mem poly_classify_real_shift(const PolyWindows& p, int type, double sx, double sy) {
    constexpr double guard = 1e-9;
    Shear inv = p.shear.star().inverse();
    double px, py;
    inv.apply_embedded(sx, sy, &px, &py);
    const Box& r = dp_windows()[type];
    double lox = r.x0.embed() + p.u[type].x.embed(), hix = r.x1.embed() + p.u[type].x.embed();
    double loy = r.y0.embed() + p.u[type].y.embed(), hiy = r.y1.embed() + p.u[type].y.embed();
    if (px < lox - guard || px > hix + guard || py < loy - guard || py > hiy + guard)
        return Mem::Out;
    if (px > lox + guard && px < hix - guard && py > loy + guard && py < hiy - guard)
        return Mem::In;
    return Mem::Uncertain;
}

} // namespace

Mem WindowSet::classify(int type, const ZTauVec2& xstar, const StarShift& s) const {
    if (poly) {
        switch (s.kind) {
            case StarShift::Kind::Zero:
                return poly->classify(type, xstar);
            case StarShift::Kind::Exact:
                return poly_classify_exact_shift(*poly, type, xstar, s.x, s.y);
            case StarShift::Kind::Real:
                return poly_classify_real_shift(*poly, type, xstar.x.embed() - s.rx,
                                                xstar.y.embed() - s.ry);
        }
    }
    if (raster)
        return raster_classify(*raster, type, xstar.x.embed() - s.vx(), xstar.y.embed() - s.vy());
    throw std::logic_error("WindowSet: no window attached");
}

void WindowSet::star_bounds(double* x0, double* y0, double* x1, double* y1) const {
    double ax = 1e300, ay = 1e300, bx = -1e300, by = -1e300;
    if (poly) {
        for (int i = 0; i < 4; ++i) {
            for (const ZTauVec2& v : poly->vertices(i)) {
                ax = std::min(ax, v.x.embed());
                bx = std::max(bx, v.x.embed());
                ay = std::min(ay, v.y.embed());
                by = std::max(by, v.y.embed());
            }
        }
    } else if (raster) {
        double h = raster->h();
        for (int i = 0; i < 4; ++i) {
            const BitGrid& g = raster->outer[i];
            ax = std::min(ax, g.ix0 * h);
            bx = std::max(bx, (g.ix0 + g.w) * h);
            ay = std::min(ay, g.iy0 * h);
            by = std::max(by, (g.iy0 + g.h) * h);
        }
    } else {
        throw std::logic_error("WindowSet: no window attached");
    }
    *x0 = ax;
    *y0 = ay;
    *x1 = bx;
    *y1 = by;
}

std::vector<ZTau> enumerate_ztau_range(double lo, double hi, double slo, double shi) {
    std::vector<ZTau> out;
    if (lo > hi || slo > shi) return out;
    long long b0 = (long long)std::floor((lo - shi) / kSqrt5) - 1;
    long long b1 = (long long)std::ceil((hi - slo) / kSqrt5) + 1;
    constexpr double eps = 1e-9;
    for (long long b = b0; b <= b1; ++b) {
        double alo = std::max(lo - b * kTau, slo - b * kSigma);
        double ahi = std::min(hi - b * kTau, shi - b * kSigma);
        for (long long a = (long long)std::ceil(alo - eps); a <= (long long)std::floor(ahi + eps);
             ++a) {
            double v = a + b * kTau, c = a + b * kSigma;
            if (v >= lo - eps && v <= hi + eps && c >= slo - eps && c <= shi + eps)
                out.push_back(ZTau{a, b});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Classification of one lattice point against all four windows.
// Returns: type >= 0 definite member, -1 definite non-member, -2 uncertain.
int classify_point(const WindowSet& w, const ZTauVec2& xstar, const StarShift& s) {
    int found = -1;
    bool unc = false;
    for (int i = 0; i < 4; ++i) {
        Mem m = w.classify(i, xstar, s);
        if (m == Mem::In) {
            if (found >= 0) return -2; // overlapping certification; treat conservatively
            found = i;
        } else if (m == Mem::Uncertain) {
            unc = true;
        }
    }
    if (unc) return -2;
    return found;
}

} // namespace

ModelSetResult model_set(const WindowSet& w, const Box& region, const StarShift& shift) {
    double wx0, wy0, wx1, wy1;
    w.star_bounds(&wx0, &wy0, &wx1, &wy1);
    if (wx0 > wx1) throw std::invalid_argument("model_set: empty window");
    double m = 0.05;
    wx0 += shift.vx() - m;
    wx1 += shift.vx() + m;
    wy0 += shift.vy() - m;
    wy1 += shift.vy() + m;

    std::vector<ZTau> xs = enumerate_ztau_range(region.x0.embed() - 1e-9, region.x1.embed() + 1e-9,
                                                wx0, wx1);
    std::vector<ZTau> ys = enumerate_ztau_range(region.y0.embed() - 1e-9, region.y1.embed() + 1e-9,
                                                wy0, wy1);
    ModelSetResult res;
    for (const ZTau& x : xs) {
        if ((x - region.x0).sign() < 0 || (region.x1 - x).sign() < 0) continue;
        for (const ZTau& y : ys) {
            if ((y - region.y0).sign() < 0 || (region.y1 - y).sign() < 0) continue;
            ZTauVec2 v{x, y};
            int c = classify_point(w, v.star(), shift);
            if (c >= 0)
                res.points.push_back({v, c});
            else if (c == -2)
                res.uncertain.push_back({v, -1});
        }
    }
    std::sort(res.points.begin(), res.points.end());
    std::sort(res.uncertain.begin(), res.uncertain.end());
    return res;
}

CompareReport compare_patch_modelset(const RuleId& id, int n, const ZTau& margin,
                                     const WindowSet& w) {
    CompareReport rep;
    Supertile st = supertile_patch(id, n);
    Box region{st.bounds.x0 + margin, st.bounds.y0 + margin, st.bounds.x1 - margin,
               st.bounds.y1 - margin};
    if (!region.nonempty_interior() && n > 0)
        throw std::invalid_argument("compare_patch_modelset: margin eats the whole footprint");

    auto in_region = [&](const ZTauVec2& v) {
        return (v.x - region.x0).sign() >= 0 && (region.x1 - v.x).sign() >= 0 &&
               (v.y - region.y0).sign() >= 0 && (region.y1 - v.y).sign() >= 0;
    };

    std::map<ZTauVec2, int> patch_types;
    std::set<ZTauVec2> excluded_pos;
    StarShift shift = StarShift::zero();

    for (const PlacedTile& t : st.patch.tiles) {
        if (!in_region(t.pos)) continue;
        rep.total_points++;
        patch_types.emplace(t.pos, t.type);
        int c = classify_point(w, t.pos.star(), shift);
        if (c == -2) {
            excluded_pos.insert(t.pos);
            continue;
        }
        rep.patch_compared++;
        if (c != t.type) {
            rep.mismatches++;
            if (rep.mismatch_examples.size() < 8)
                rep.mismatch_examples.push_back("patch tile type " + std::to_string(t.type) +
                                                " at (" + t.pos.x.str() + ", " + t.pos.y.str() +
                                                ") classifies as " + std::to_string(c));
        }
    }

    ModelSetResult ms = model_set(w, region, shift);
    for (const ModelPoint& p : ms.points) {
        rep.model_compared++;
        auto it = patch_types.find(p.v);
        if (it == patch_types.end() || it->second != p.type) {
            rep.mismatches++;
            if (rep.mismatch_examples.size() < 8)
                rep.mismatch_examples.push_back(
                    "model point type " + std::to_string(p.type) + " at (" + p.v.x.str() + ", " +
                    p.v.y.str() + ") " +
                    (it == patch_types.end() ? "missing from patch"
                                             : "patch has type " + std::to_string(it->second)));
        }
    }
    for (const ModelPoint& p : ms.uncertain) excluded_pos.insert(p.v);
    rep.excluded = excluded_pos.size();
    return rep;
}

std::array<std::array<double, 4>, 4> lattice_basis() {
    // columns (tau,0,tau',0), (1,0,1,0), (0,tau,0,tau'), (0,1,0,1)
    return {{{kTau, 0, kSigma, 0}, {1, 0, 1, 0}, {0, kTau, 0, kSigma}, {0, 1, 0, 1}}};
}

double lattice_covolume() {
    // |det| of the block pairs: (tau - tau')^2 = 5
    return (kTau - kSigma) * (kTau - kSigma);
}

TorusPoint torus_coords(double d1, double d2, double e1, double e2) {
    double n1 = (d1 - e1) / kSqrt5;
    double n2 = d1 - n1 * kTau;
    double n3 = (d2 - e2) / kSqrt5;
    double n4 = d2 - n3 * kTau;
    TorusPoint t;
    std::array<double, 4> n = {n1, n2, n3, n4};
    for (int i = 0; i < 4; ++i) t.frac[i] = n[i] - std::floor(n[i]);
    t.rep = {t.frac[0] * kTau + t.frac[1], t.frac[2] * kTau + t.frac[3],
             t.frac[0] * kSigma + t.frac[1], t.frac[2] * kSigma + t.frac[3]};
    return t;
}

TorusPoint torus_coords_lifted(const ZTauVec2& t) {
    // (t, t*) has integer lattice coordinates (b, a, d, c); the reduction is 0
    TorusPoint p;
    p.frac = {0, 0, 0, 0};
    p.rep = {0, 0, 0, 0};
    return p;
}

} // namespace dpv
