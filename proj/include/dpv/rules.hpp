#pragma once

#include "dpv/box.hpp"
#include "dpv/ztau.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpv {

// ---------------------------------------------------------------------------
// Prototiles. T0 = 1x1, T1 = tau x 1, T2 = 1 x tau, T3 = tau x tau; the
// control point is the lower-left corner. Bit 0 of the type index says the
// tile is wide, bit 1 that it is tall; areas are (1, tau, tau, tau^2).
// ---------------------------------------------------------------------------

inline ZTau tile_width(int type) { return (type & 1) ? ZTau::tau() : ZTau::one(); }
inline ZTau tile_height(int type) { return (type & 2) ? ZTau::tau() : ZTau::one(); }
inline Box tile_box(int type, const ZTauVec2& control) {
    return Box::at(control, tile_width(type), tile_height(type));
}

/// One of the 48 direct-product-variation inflation rules, addressed as
/// (i1, i2, i3): i1 picks the T1 decomposition, i2 the T2 decomposition,
/// i3 = 3c + v the T3 decomposition (c = corner holding the T3 child,
/// v = arrangement of {T0, T1, T2} in the remaining L-shape).
struct RuleId {
    int i1 = 0, i2 = 0, i3 = 0;

    bool valid() const { return (i1 == 0 || i1 == 1) && (i2 == 0 || i2 == 1) && i3 >= 0 && i3 < 12; }
    int index() const { return (i1 * 2 + i2) * 12 + i3; }
    static RuleId from_index(int idx) { return {idx / 24, (idx / 12) % 2, idx % 12}; }
    static constexpr int count = 48;

    std::string str() const;
    static RuleId parse(const std::string& s);

    friend bool operator==(const RuleId&, const RuleId&) = default;
    friend auto operator<=>(const RuleId& a, const RuleId& b) { return a.index() <=> b.index(); }
};

/// All 48 rule ids in index order.
std::vector<RuleId> all_rules();

/// A child tile placed inside an inflated parent.
struct ChildPlacement {
    int type;
    ZTauVec2 offset;

    friend bool operator==(const ChildPlacement&, const ChildPlacement&) = default;
    friend auto operator<=>(const ChildPlacement& a, const ChildPlacement& b) {
        auto c = a.type <=> b.type;
        return c != 0 ? c : a.offset <=> b.offset;
    }
};

/// Per-parent child placement tables of one inflation rule. Children are
/// kept sorted to give every rule a canonical form.
struct Decomposition {
    std::array<std::vector<ChildPlacement>, 4> parent;

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
    friend auto operator<=>(const Decomposition&, const Decomposition&) = default;
};

/// Builds the explicit decomposition tables of a rule. Throws on invalid id.
Decomposition build_rule(const RuleId& id);

/// 4x4 substitution matrix; entry (i, p) counts type-i children in parent p.
using SubstMatrix = std::array<std::array<int, 4>, 4>;
SubstMatrix substitution_matrix(const RuleId& id);

/// Exact stone-inflation check: the children of every parent partition the
/// tau-inflated parent box.
struct StoneReport {
    bool ok = true;
    std::string detail;
};
StoneReport verify_stone(const Decomposition& dec);
StoneReport verify_stone(const RuleId& id);

// ---------------------------------------------------------------------------
// Patches
// ---------------------------------------------------------------------------

struct PlacedTile {
    int type;
    ZTauVec2 pos; // control point (lower-left corner)

    friend bool operator==(const PlacedTile&, const PlacedTile&) = default;
    friend auto operator<=>(const PlacedTile& a, const PlacedTile& b) {
        auto c = a.pos <=> b.pos;
        return c != 0 ? c : a.type <=> b.type;
    }
};

/// Finite list of placed tiles in lexicographic control-point order.
struct Patch {
    std::vector<PlacedTile> tiles;

    size_t size() const { return tiles.size(); }
    std::array<size_t, 4> type_counts() const;
    void sort_canonical();
    /// Exact pairwise interior-disjointness check (quadratic; fine at desk scale).
    bool interior_disjoint(std::string* offender = nullptr) const;
};

/// Replaces every tile (i, x) by its children (j, tau*x + offset).
Patch inflate_patch(const Patch& p, const Decomposition& dec);
Patch inflate_patch(const Patch& p, const RuleId& id);

/// n-fold inflation of a single T3 anchored at the origin, plus its exact
/// bounding box [0, tau^(n+1)]^2.
struct Supertile {
    Patch patch;
    Box bounds;
};
Supertile supertile_patch(const RuleId& id, int n);

// ---------------------------------------------------------------------------
// D4 action. Elements are the eight symmetries of the square as exact
// sign/permutation matrices; they act geometrically on decompositions.
// ---------------------------------------------------------------------------

struct D4Element {
    // matrix ((m00, m01), (m10, m11)) with entries in {-1, 0, 1}
    int m00, m01, m10, m11;
    const char* name;

    bool swaps_axes() const { return m00 == 0; }
    ZTauVec2 apply(const ZTauVec2& v) const;
    friend bool operator==(const D4Element& a, const D4Element& b) {
        return a.m00 == b.m00 && a.m01 == b.m01 && a.m10 == b.m10 && a.m11 == b.m11;
    }
};

/// The eight elements: id, r90, r180, r270, mx, my, diag, anti.
const std::array<D4Element, 8>& d4_elements();
D4Element d4_compose(const D4Element& g, const D4Element& h); // g after h

/// Transforms a parent decomposition geometrically by g: child boxes are
/// mapped, re-anchored to lower-left corners, and types 1<->2 swap when g
/// exchanges the axes. `parent` is the parent type before transforming.
std::vector<ChildPlacement> transform_children(const std::vector<ChildPlacement>& children,
                                               int parent, const D4Element& g);

/// The induced action on rule ids; throws if the image is not in the catalog
/// (the catalog is D4-closed, so that would be a bug).
RuleId d4_transform(const RuleId& id, const D4Element& g);

/// Orbit partition of the 48 rules under D4, each orbit sorted, orbits
/// ordered by smallest member.
std::vector<std::vector<RuleId>> d4_orbits();

} // namespace dpv
