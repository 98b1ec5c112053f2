#include "dpv/ztau.hpp"

#include <cmath>
#include <cstdlib>

namespace dpv {

namespace detail {

std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
    char buf[48];
    int n = 0;
    while (u > 0) {
        buf[n++] = char('0' + (int)(u % 10));
        u /= 10;
    }
    std::string s;
    if (neg) s.push_back('-');
    while (n > 0) s.push_back(buf[--n]);
    return s;
}

i128 i128_from_string(const std::string& s, size_t* pos) {
    size_t i = pos ? *pos : 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i >= s.size() || !isdigit((unsigned char)s[i]))
        throw std::invalid_argument("ZTau parse: expected integer in '" + s + "'");
    i128 v = 0;
    while (i < s.size() && isdigit((unsigned char)s[i])) {
        v = checked_add(checked_mul(v, 10), s[i] - '0');
        ++i;
    }
    if (pos) *pos = i;
    return neg ? -v : v;
}

} // namespace detail

int ZTau::sign() const {
    // a + b*tau = (u + v*sqrt5)/2 with u = 2a+b, v = b.
    i128 u = detail::checked_add(detail::checked_add(a, a), b);
    i128 v = b;
    if (u == 0 && v == 0) return 0;
    if (u >= 0 && v >= 0) return 1;
    if (u <= 0 && v <= 0) return -1;
    // Mixed signs: compare u^2 against 5 v^2. Equality cannot occur (sqrt5 irrational).
    constexpr i128 lim_u = ((i128)1) << 63;
    constexpr i128 lim_v = ((i128)1) << 62;
    i128 au = u < 0 ? -u : u, av = v < 0 ? -v : v;
    if (au >= lim_u || av >= lim_v) throw ArithmeticOverflow("ZTau::sign coefficient too large");
    i128 u2 = au * au, v25 = 5 * (av * av);
    if (u > 0) return u2 > v25 ? 1 : -1;   // v < 0
    return u2 > v25 ? -1 : 1;              // u < 0, v > 0
}

double ZTau::embed() const {
    return (double)a + (double)b * kTau;
}

double ZTau::embed_error_bound() const {
    double ad = std::fabs((double)a), bd = std::fabs((double)b);
    // conversion, constant, product and sum each contribute O(ulp)
    return (ad + bd * kTau + std::fabs(embed()) + 1e-300) * 0x1p-50;
}

std::string ZTau::str() const {
    std::string s = detail::i128_to_string(a);
    s += b < 0 ? "-" : "+";
    s += detail::i128_to_string(b < 0 ? -b : b);
    s += "*tau";
    return s;
}

ZTau ZTau::parse(const std::string& s) {
    size_t pos = 0;
    i128 a = detail::i128_from_string(s, &pos);
    if (pos == s.size()) return {a, 0}; // plain integer accepted
    i128 b = detail::i128_from_string(s, &pos);
    if (s.compare(pos, 4, "*tau") != 0 || pos + 4 != s.size())
        throw std::invalid_argument("ZTau parse: expected 'a+b*tau', got '" + s + "'");
    return {a, b};
}

ZTau tau_pow(long n) {
    ZTau base = n >= 0 ? ZTau::tau() : ZTau::tau_inv();
    unsigned long e = n >= 0 ? (unsigned long)n : (unsigned long)(-n);
    ZTau r = ZTau::one();
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

} // namespace dpv
