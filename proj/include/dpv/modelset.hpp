#pragma once

#include "dpv/box.hpp"
#include "dpv/raster.hpp"
#include "dpv/window.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpv {

/// Small exact rational, used for star-side shifts given on the CLI.
struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return double(num) / double(den); }
};

/// Star-side translation of the window. Zero and Rational shifts keep
/// membership tests exact; Real shifts (e.g. transcendental generic shifts)
/// use guarded floating pointtests.
struct StarShift {
    enum class Kind { Zero, Exact, Real };
    Kind kind = Kind::Zero;
    Rational x, y;
    double rx = 0, ry = 0;

    static StarShift zero() { return {}; }
    static StarShift exact(Rational px, Rational py) {
        StarShift s;
        s.kind = Kind::Exact;
        s.x = px;
        s.y = py;
        return s;
    }
    static StarShift real(double px, double py) {
        StarShift s;
        s.kind = Kind::Real;
        s.rx = px;
        s.ry = py;
        return s;
    }
    double vx() const { return kind == Kind::Exact ? x.value() : (kind == Kind::Real ? rx : 0.0); }
    double vy() const { return kind == Kind::Exact ? y.value() : (kind == Kind::Real ? ry : 0.0); }
};

/// Membership view over either certified polygons or a raster.
struct WindowSet {
    const PolyWindows* poly = nullptr;
    const WindowRaster* raster = nullptr;

    /// Three-way membership of xstar in window `type` shifted by `s`.
    Mem classify(int type, const ZTauVec2& xstar, const StarShift& s) const;
    /// Star-space bounding box of all four windows, shift included.
    void star_bounds(double* x0, double* y0, double* x1, double* y1) const;
};

struct ModelPoint {
    ZTauVec2 v;
    int type;

    friend bool operator==(const ModelPoint&, const ModelPoint&) = default;
    friend auto operator<=>(const ModelPoint& a, const ModelPoint& b) {
        auto c = a.v <=> b.v;
        return c != 0 ? c : a.type <=> b.type;
    }
};

struct ModelSetResult {
    std::vector<ModelPoint> points;    // definite members, sorted
    std::vector<ModelPoint> uncertain; // star image in the exclusion band
};

/// Enumerates x in Z[tau]^2 with pi(x) in `region` and classifies the star
/// images against the window set. Throws when the window set is empty.
ModelSetResult model_set(const WindowSet& w, const Box& region, const StarShift& shift);

/// Exact patch / model-set comparison over the supertile footprint shrunk by
/// `margin` on every side. Points whose star image falls in the boundary
/// exclusion band are reported, not compared.
struct CompareReport {
    size_t patch_compared = 0;   // definite patch points in the region
    size_t model_compared = 0;   // definite model-set points
    size_t excluded = 0;         // boundary-band points, both sides combined
    size_t mismatches = 0;
    std::vector<std::string> mismatch_examples; // capped
    size_t total_points = 0;     // all patch points in the region

    bool ok() const { return mismatches == 0; }
    double uncertain_fraction() const {
        return total_points ? double(excluded) / double(total_points) : 0.0;
    }
};
CompareReport compare_patch_modelset(const RuleId& id, int n, const ZTau& margin,
                                     const WindowSet& w);

// ---------------------------------------------------------------------------
// Lattice and torus parametrisation
// ---------------------------------------------------------------------------

/// Columns of the Minkowski embedding basis of L = Z[tau] x Z[tau] in R^4,
/// coordinate order (direct x, direct y, internal x, internal y).
std::array<std::array<double, 4>, 4> lattice_basis();

/// |det| of the basis, exactly 5 up to rounding.
double lattice_covolume();

/// Fractional lattice coordinates of a point of R^2 x R^2 modulo the lattice;
/// the canonical representative is basis * frac.
struct TorusPoint {
    std::array<double, 4> frac;                 // in [0, 1)
    std::array<double, 4> rep;                  // representative point
};
TorusPoint torus_coords(double d1, double d2, double e1, double e2);

/// Exact reduction of a lifted lattice vector (t, t*): always zero.
TorusPoint torus_coords_lifted(const ZTauVec2& t);

/// Enumerates all x = a + b*tau with embed(x) in [lo, hi] and conj embed in
/// [slo, shi] (closed, evaluated exactly).
std::vector<ZTau> enumerate_ztau_range(double lo, double hi, double slo, double shi);

} // namespace dpv
