#pragma once

#include "dpv/ztau.hpp"

#include <string>
#include <vector>

namespace dpv {

// ---------------------------------------------------------------------------
// 1D Fibonacci substitution a -> ab, b -> a, with tile lengths |a| = tau,
// |b| = 1. Serves both as a warm-up oracle and as the row structure behind
// striped rules.
// ---------------------------------------------------------------------------

/// Word over {a, b}, stored as chars 'a'/'b'.
using FibWord = std::string;

/// n-fold substitution image of w.
FibWord substitute_word(const FibWord& w, int n);

/// One interval tile of a 1D Fibonacci tiling.
struct FibTile {
    char letter;  // 'a' or 'b'
    ZTau left;    // left endpoint (control point)

    ZTau length() const { return letter == 'a' ? ZTau::tau() : ZTau::one(); }
    friend bool operator==(const FibTile&, const FibTile&) = default;
};

/// Tiling of an interval around 0; consecutive tiles abut exactly and the
/// tile starting at 0 exists. Built from a legal two-letter seed u|v of the
/// square of the substitution (u ends, v starts the words).
struct FibTiling1D {
    std::vector<FibTile> tiles; // ordered left to right

    ZTau left_end() const { return tiles.front().left; }
    ZTau right_end() const { return tiles.back().left + tiles.back().length(); }
};

/// Legal seeds are "a|a" and "b|a". n applications of the squared
/// substitution are laid out left and right of the origin. Throws on an
/// illegal seed.
FibTiling1D fib_tiling(const std::string& seed, int n);

/// Window convention for the 1D cut-and-project description: which ends of
/// the windows are closed. A: a-window [tau-2, tau-1), b-window [-1, tau-2).
/// B: the half-openness flipped.
enum class FibConvention { A, B };

/// Exact membership of a conjugated control point in the letter window.
bool fib_window_contains(char letter, const ZTau& xstar, FibConvention conv);

struct FibProjectionReport {
    size_t checked = 0;
    size_t mismatches = 0;
    std::vector<size_t> mismatch_indices; // capped at 16 entries
};

/// Checks x' in Omega_letter for every control point under the chosen
/// convention. Exactly one convention matches a given legal seed.
FibProjectionReport verify_fib_projection(const FibTiling1D& t, FibConvention conv);

} // namespace dpv
