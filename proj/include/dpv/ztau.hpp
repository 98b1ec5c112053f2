#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <compare>

namespace dpv {

using i128 = __int128;

/// Thrown when a coefficient leaves the checked 128-bit range.
struct ArithmeticOverflow : std::overflow_error {
    ArithmeticOverflow() : std::overflow_error("ZTau coefficient overflow") {}
    explicit ArithmeticOverflow(const char* what) : std::overflow_error(what) {}
};

namespace detail {

inline i128 checked_add(i128 x, i128 y) {
    i128 r;
    if (__builtin_add_overflow(x, y, &r)) throw ArithmeticOverflow();
    return r;
}

inline i128 checked_sub(i128 x, i128 y) {
    i128 r;
    if (__builtin_sub_overflow(x, y, &r)) throw ArithmeticOverflow();
    return r;
}

inline i128 checked_mul(i128 x, i128 y) {
    i128 r;
    if (__builtin_mul_overflow(x, y, &r)) throw ArithmeticOverflow();
    return r;
}

std::string i128_to_string(i128 v);
i128 i128_from_string(const std::string& s, size_t* pos);

} // namespace detail

/// Element a + b*tau of the ring Z[tau], tau = (1+sqrt(5))/2.
/// Multiplication reduces via tau^2 = tau + 1. All operations are checked;
/// coefficients never wrap silently.
struct ZTau {
    i128 a = 0; // rational part
    i128 b = 0; // coefficient of tau

    constexpr ZTau() = default;
    constexpr ZTau(i128 a_, i128 b_) : a(a_), b(b_) {}
    static constexpr ZTau zero() { return {0, 0}; }
    static constexpr ZTau one() { return {1, 0}; }
    static constexpr ZTau tau() { return {0, 1}; }
    /// tau^-1 = tau - 1 (tau is a unit).
    static constexpr ZTau tau_inv() { return {-1, 1}; }
    /// sigma = 1 - tau = -1/tau, the Galois conjugate of tau.
    static constexpr ZTau sigma() { return {1, -1}; }

    friend ZTau operator+(const ZTau& x, const ZTau& y) {
        return {detail::checked_add(x.a, y.a), detail::checked_add(x.b, y.b)};
    }
    friend ZTau operator-(const ZTau& x, const ZTau& y) {
        return {detail::checked_sub(x.a, y.a), detail::checked_sub(x.b, y.b)};
    }
    friend ZTau operator-(const ZTau& x) {
        return {detail::checked_sub(0, x.a), detail::checked_sub(0, x.b)};
    }
    /// (a+b t)(c+d t) = ac + (ad+bc) t + bd t^2, t^2 = t+1.
    friend ZTau operator*(const ZTau& x, const ZTau& y) {
        using namespace detail;
        i128 bd = checked_mul(x.b, y.b);
        i128 ra = checked_add(checked_mul(x.a, y.a), bd);
        i128 rb = checked_add(checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a)), bd);
        return {ra, rb};
    }
    ZTau& operator+=(const ZTau& y) { return *this = *this + y; }
    ZTau& operator-=(const ZTau& y) { return *this = *this - y; }
    ZTau& operator*=(const ZTau& y) { return *this = *this * y; }

    friend bool operator==(const ZTau& x, const ZTau& y) { return x.a == y.a && x.b == y.b; }

    /// Galois conjugation: a + b*tau -> (a+b) - b*tau. Ring involution.
    ZTau conj() const { return {detail::checked_add(a, b), detail::checked_sub(0, b)}; }

    /// Field norm N(x) = x * conj(x) = a^2 + ab - b^2 (a rational integer).
    i128 norm() const {
        using namespace detail;
        return checked_sub(checked_add(checked_mul(a, a), checked_mul(a, b)), checked_mul(b, b));
    }

    bool is_zero() const { return a == 0 && b == 0; }

    /// Exact sign of the real embedding a + b*(1+sqrt5)/2.
    /// Decided by integer casework on u + v*sqrt5 with u = 2a+b, v = b.
    int sign() const;

    /// Exact total order consistent with the real embedding.
    friend std::strong_ordering operator<=>(const ZTau& x, const ZTau& y) {
        int s = (x - y).sign();
        return s < 0 ? std::strong_ordering::less
             : s > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    /// Nearest-double embedding.
    double embed() const;
    /// Upper bound on |embed() - exact value|.
    double embed_error_bound() const;

    /// Canonical textual form "a+b*tau" (e.g. "5+8*tau", "-1-1*tau").
    std::string str() const;
    /// Parses the canonical form; throws std::invalid_argument on junk.
    static ZTau parse(const std::string& s);
};

/// tau^n for any integer n (negative powers via tau^-1 = tau-1).
ZTau tau_pow(long n);

/// Vector in Z[tau]^2; the coordinate domain of all tiling geometry.
struct ZTauVec2 {
    ZTau x, y;

    constexpr ZTauVec2() = default;
    constexpr ZTauVec2(ZTau x_, ZTau y_) : x(x_), y(y_) {}

    friend ZTauVec2 operator+(const ZTauVec2& u, const ZTauVec2& v) { return {u.x + v.x, u.y + v.y}; }
    friend ZTauVec2 operator-(const ZTauVec2& u, const ZTauVec2& v) { return {u.x - v.x, u.y - v.y}; }
    friend ZTauVec2 operator-(const ZTauVec2& u) { return {-u.x, -u.y}; }
    friend ZTauVec2 operator*(const ZTau& s, const ZTauVec2& v) { return {s * v.x, s * v.y}; }
    friend bool operator==(const ZTauVec2& u, const ZTauVec2& v) { return u.x == v.x && u.y == v.y; }

    /// Componentwise Galois conjugation (the star map on L = Z[tau]^2).
    ZTauVec2 star() const { return {x.conj(), y.conj()}; }

    /// Lexicographic order by exact comparison (x, then y).
    friend std::strong_ordering operator<=>(const ZTauVec2& u, const ZTauVec2& v) {
        auto c = u.x <=> v.x;
        return c != 0 ? c : u.y <=> v.y;
    }

    double ex() const { return x.embed(); }
    double ey() const { return y.embed(); }
};

inline constexpr double kTau = 1.6180339887498948482;   // (1+sqrt5)/2
inline constexpr double kSigma = 1.0 - kTau;            // 1-tau = -1/tau
inline constexpr double kSqrt5 = 2.2360679774997896964;

} // namespace dpv
