#pragma once

#include "dpv/box.hpp"
#include "dpv/raster.hpp"

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace dpv {

/// Windows of the plain direct-product rule: per-type axis-aligned
/// rectangles built on the interval split [-1, tau-2, tau-1].
const std::array<Box, 4>& dp_windows();

/// Unimodular shear [[1,a],[0,1]] (upper) or [[1,0],[a,1]] (lower) with
/// a in {0, ±1, ±tau, ±1/tau}; a = 0 is the identity.
struct Shear {
    bool upper = true;
    ZTau alpha = ZTau::zero();

    bool is_identity() const { return alpha.is_zero(); }
    ZTauVec2 apply(const ZTauVec2& v) const {
        if (upper) return {v.x + alpha * v.y, v.y};
        return {v.x, v.y + alpha * v.x};
    }
    void apply_embedded(double x, double y, double* ox, double* oy) const {
        double a = alpha.embed();
        if (upper) {
            *ox = x + a * y;
            *oy = y;
        } else {
            *ox = x;
            *oy = y + a * x;
        }
    }
    Shear star() const { return {upper, alpha.conj()}; }
    Shear inverse() const { return {upper, -alpha}; }
    /// Smaller singular value, (1/sqrt2)*sqrt(a^2 - |a| sqrt(a^2+4) + 2).
    double smaller_singular_value() const;
    std::string str() const;

    friend bool operator==(const Shear&, const Shear&) = default;
};

/// The twelve non-identity shear candidates (2 forms x 6 values of alpha).
const std::vector<Shear>& shear_candidates();

/// Exactly certified polygonal windows of one rule: in internal space,
/// window_i = S*(R_i + u_i) where S* is the star shear and R_i are the
/// direct-product rectangles. The certificate is an exact verification that
/// these parallelograms solve the window IFS, which pins them as the unique
/// attractor.
struct PolyWindows {
    RuleId rule;
    Shear shear; // direct-space S
    std::array<ZTauVec2, 4> u;

    /// Star-side translations t_i* = S* u_i.
    std::array<ZTauVec2, 4> t_star() const;
    /// Direct-space control-point retranslations t_i (star preimages).
    std::array<ZTauVec2, 4> t_direct() const;
    /// CCW vertices of window i.
    std::array<ZTauVec2, 4> vertices(int i) const;
    /// Exact membership; Uncertain stands for "exactly on the boundary".
    Mem classify(int type, const ZTauVec2& xstar) const;
};

struct CertifyFailure {
    bool snap_ambiguous = false;
    std::string detail;
};

using CertifyOutcome = std::variant<PolyWindows, CertifyFailure>;

/// Fits a shear candidate to the raster, snaps the translations to Z[tau]^2
/// (coefficients bounded by 4), and verifies the window IFS exactly in
/// unsheared coordinates. Requires raster resolution k >= 8.
CertifyOutcome certify_polygonal_window(const WindowIFS& ifs, const WindowRaster& raster);

/// Tries every candidate (identity plus the 12 shears) and returns all that
/// verify exactly; used to assert uniqueness.
std::vector<PolyWindows> all_certified_shears(const WindowIFS& ifs, const WindowRaster& raster);

/// Exact verification that the parallelograms S*(R_i + u_i) solve the IFS.
bool verify_window_ifs_exact(const WindowIFS& ifs, const Shear& shear,
                             const std::array<ZTauVec2, 4>& u, std::string* why = nullptr);

/// The sheared prototiles P_i = S T_i as exact parallelograms, verified to
/// satisfy the adjoint tile equations carried over by S.
struct ShearedPrototiles {
    Shear shear;
    std::array<std::array<ZTauVec2, 4>, 4> corners; // CCW per tile type
    bool adjoint_verified = false;
    std::string detail;
};
ShearedPrototiles sheared_prototiles(const Shear& s);

} // namespace dpv
