#include "dpv/fib1d.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpv {

FibWord substitute_word(const FibWord& w, int n) {
    if (n < 0) throw std::invalid_argument("substitute_word: n must be >= 0");
    FibWord cur = w;
    for (int k = 0; k < n; ++k) {
        FibWord next;
        next.reserve(cur.size() * 2);
        for (char c : cur) {
            if (c == 'a')
                next += "ab";
            else if (c == 'b')
                next += 'a';
            else
                throw std::invalid_argument("substitute_word: alphabet is {a, b}");
        }
        cur = std::move(next);
    }
    return cur;
}

FibTiling1D fib_tiling(const std::string& seed, int n) {
    if (n < 0) throw std::invalid_argument("fib_tiling: n must be >= 0");
    if (seed != "a|a" && seed != "b|a")
        throw std::invalid_argument("fib_tiling: seed must be a legal two-letter seed (a|a or b|a)");
    // Two substitution steps per n keep the seed letters at the origin.
    FibWord left = substitute_word(std::string(1, seed[0]), 2 * n);
    FibWord right = substitute_word(std::string(1, seed[2]), 2 * n);

    FibTiling1D t;
    t.tiles.reserve(left.size() + right.size());
    ZTau pos = ZTau::zero();
    for (auto it = left.rbegin(); it != left.rend(); ++it) {
        FibTile tile{*it, ZTau::zero()};
        pos -= tile.length();
        tile.left = pos;
        t.tiles.push_back(tile);
    }
    std::reverse(t.tiles.begin(), t.tiles.end());
    pos = ZTau::zero();
    for (char c : right) {
        FibTile tile{c, pos};
        pos += tile.length();
        t.tiles.push_back(tile);
    }
    return t;
}

bool fib_window_contains(char letter, const ZTau& xstar, FibConvention conv) {
    // Window endpoints: a-window between tau-2 and tau-1, b-window between
    // -1 and tau-2.
    ZTau lo = letter == 'a' ? ZTau{-2, 1} : ZTau{-1, 0};
    ZTau hi = letter == 'a' ? ZTau{-1, 1} : ZTau{-2, 1};
    if (conv == FibConvention::A) return lo <= xstar && xstar < hi;
    return lo < xstar && xstar <= hi;
}

FibProjectionReport verify_fib_projection(const FibTiling1D& t, FibConvention conv) {
    FibProjectionReport rep;
    for (size_t i = 0; i < t.tiles.size(); ++i) {
        rep.checked++;
        if (!fib_window_contains(t.tiles[i].letter, t.tiles[i].left.conj(), conv)) {
            rep.mismatches++;
            if (rep.mismatch_indices.size() < 16) rep.mismatch_indices.push_back(i);
        }
    }
    return rep;
}

} // namespace dpv
