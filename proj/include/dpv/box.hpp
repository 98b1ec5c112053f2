#pragma once

#include "dpv/ztau.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dpv {

/// Axis-aligned rectangle with exact Z[tau] corners, x0 <= x1, y0 <= y1.
struct Box {
    ZTau x0, y0, x1, y1;

    static Box at(const ZTauVec2& anchor, const ZTau& w, const ZTau& h) {
        return {anchor.x, anchor.y, anchor.x + w, anchor.y + h};
    }
    ZTau width() const { return x1 - x0; }
    ZTau height() const { return y1 - y0; }
    ZTau area() const { return width() * height(); }
    ZTauVec2 lo() const { return {x0, y0}; }
    ZTauVec2 hi() const { return {x1, y1}; }

    bool nonempty_interior() const { return x0 < x1 && y0 < y1; }
    bool contains(const Box& o) const {
        return x0 <= o.x0 && o.x1 <= x1 && y0 <= o.y0 && o.y1 <= y1;
    }
    /// Open-interior overlap (shared edges do not count).
    bool interior_overlaps(const Box& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
    /// Scale by an exact ring element; s may be negative (corners swap).
    Box scaled(const ZTau& s) const {
        ZTau a = s * x0, b = s * x1, c = s * y0, d = s * y1;
        if (s.sign() < 0) return {b, d, a, c};
        return {a, c, b, d};
    }
    Box translated(const ZTauVec2& t) const { return {x0 + t.x, y0 + t.y, x1 + t.x, y1 + t.y}; }

    friend bool operator==(const Box&, const Box&) = default;
};

/// Result of an exact partition check. On failure `detail` names the offence.
struct PartitionReport {
    bool ok = true;
    std::string detail;
};

/// Verifies exactly that `pieces` partition `target` up to measure zero:
/// every piece inside, pairwise interior-disjoint, areas summing to the
/// target area. For closed rectangles the three conditions together force
/// the union to equal the target set exactly.
PartitionReport verify_box_partition(const Box& target, const std::vector<Box>& pieces);

} // namespace dpv
