#pragma once

// Certified rational enclosures for exp, log, sqrt and rational powers.
// Everything is computed with outward-rounded rational arithmetic; the
// returned interval always contains the exact real value. No floating
// point is used anywhere on these paths.

#include <string>
#include <utility>

#include "prodmeas/errors.hpp"
#include "prodmeas/rational.hpp"

namespace prodmeas {

struct RatInterval {
    Rat lo;
    Rat hi;

    RatInterval() = default;
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw precondition_error("RatInterval: lo > hi");
    }
    static RatInterval point(const Rat& v) { return RatInterval(v, v); }

    Rat width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains(const RatInterval& other) const { return lo <= other.lo && other.hi <= hi; }

    friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
        return RatInterval(a.lo + b.lo, a.hi + b.hi);
    }
    friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
        return RatInterval(a.lo - b.hi, a.hi - b.lo);
    }
    // Scale by an exact rational; flips the ends for negative factors.
    friend RatInterval operator*(const Rat& c, const RatInterval& a) {
        return c >= 0 ? RatInterval(c * a.lo, c * a.hi) : RatInterval(c * a.hi, c * a.lo);
    }

    std::string str() const { return "[" + format_rational(lo) + ", " + format_rational(hi) + "]"; }
};

// Product of intervals with nonnegative lower ends.
inline RatInterval mul_nonneg(const RatInterval& a, const RatInterval& b) {
    if (a.lo < 0 || b.lo < 0) throw precondition_error("mul_nonneg: negative end");
    return RatInterval(a.lo * b.lo, a.hi * b.hi);
}

namespace detail {

// exp on |y| <= 1/4 by Taylor with an explicit remainder:
// |exp(y) - sum_{j<=J} y^j/j!| <= |y|^{J+1}/(J+1)! * 4/3.
inline RatInterval exp_taylor_quarter(const Rat& y, unsigned terms) {
    Rat sum(1), pow(1), fact(1);
    for (unsigned j = 1; j <= terms; ++j) {
        pow *= y;
        fact *= j;
        sum += pow / fact;
    }
    Rat abs_pow = rat_abs(pow) * rat_abs(y);
    Rat rem = abs_pow / (fact * (terms + 1)) * Rat(4, 3);
    return RatInterval(sum - rem, sum + rem);
}

// atanh(u) for |u| < 1/4 via odd series, remainder bounded geometrically.
inline RatInterval atanh_series(const Rat& u, unsigned terms) {
    Rat sum(0), pow = u;
    const Rat u2 = u * u;
    for (unsigned j = 0; j < terms; ++j) {
        sum += pow / (2 * j + 1);
        pow *= u2;
    }
    // |tail| <= |u|^{2J+1}/(2J+1) * 1/(1-u^2) <= |u|^{2J+1} * 16/15
    Rat rem = rat_abs(pow) * Rat(16, 15);
    return RatInterval(sum - rem, sum + rem);
}

inline RatInterval outward(const RatInterval& iv, unsigned bits) {
    return RatInterval(dyadic_floor(iv.lo, bits), dyadic_ceil(iv.hi, bits));
}

// ln 2 = 2 atanh(1/3).
inline RatInterval ln2_bounds(unsigned terms) {
    RatInterval a = atanh_series(Rat(1, 3), terms);
    return RatInterval(2 * a.lo, 2 * a.hi);
}

}  // namespace detail

inline RatInterval exp_bounds(const Rat& x, const Rat& max_width) {
    if (max_width <= 0) throw precondition_error("exp_bounds: max_width must be positive");
    if (x == 0) return RatInterval::point(Rat(1));

    // Halve the argument until |y| <= 1/4, then undo by repeated squaring.
    unsigned halvings = 0;
    Rat y = x;
    while (rat_abs(y) > Rat(1, 4)) {
        y /= 2;
        ++halvings;
        if (halvings > 64) throw precondition_error("exp_bounds: argument too large");
    }

    for (unsigned terms = 12, bits = 128; terms <= 192; terms *= 2, bits *= 2) {
        RatInterval iv = detail::outward(detail::exp_taylor_quarter(y, terms), bits);
        if (iv.lo <= 0) continue;  // remainder still too coarse
        for (unsigned s = 0; s < halvings; ++s)
            iv = detail::outward(RatInterval(iv.lo * iv.lo, iv.hi * iv.hi), bits);
        if (iv.width() <= max_width) return iv;
    }
    throw inconclusive_error("exp_bounds: cannot reach width " + format_rational(max_width));
}

inline RatInterval exp_bounds(const RatInterval& x, const Rat& max_width) {
    Rat half = max_width / 2;
    RatInterval lo = exp_bounds(x.lo, half);
    RatInterval hi = x.is_point() ? lo : exp_bounds(x.hi, half);
    return RatInterval(lo.lo, hi.hi);
}

inline RatInterval log_bounds(const Rat& x, const Rat& max_width) {
    if (x <= 0) throw precondition_error("log_bounds: argument must be positive");
    if (max_width <= 0) throw precondition_error("log_bounds: max_width must be positive");
    if (x == 1) return RatInterval::point(Rat(0));

    // x = m * 2^k with m in [3/4, 3/2): log x = 2 atanh((m-1)/(m+1)) + k ln 2.
    long k = 0;
    Rat m = x;
    while (m >= Rat(3, 2)) {
        m /= 2;
        ++k;
    }
    while (m < Rat(3, 4)) {
        m *= 2;
        --k;
    }
    const Rat u = (m - 1) / (m + 1);  // |u| <= 1/5

    for (unsigned terms = 16; terms <= 256; terms *= 2) {
        RatInterval lm = detail::atanh_series(u, terms);
        RatInterval iv(2 * lm.lo, 2 * lm.hi);
        if (k != 0) iv = iv + Rat(k) * detail::ln2_bounds(terms);
        if (iv.width() <= max_width) return iv;
    }
    throw inconclusive_error("log_bounds: cannot reach width " + format_rational(max_width));
}

// Exact point interval when x is a perfect rational square.
inline RatInterval sqrt_bounds(const Rat& x, const Rat& max_width) {
    if (x < 0) throw precondition_error("sqrt_bounds: negative argument");
    if (max_width <= 0) throw precondition_error("sqrt_bounds: max_width must be positive");
    if (x == 0) return RatInterval::point(Rat(0));

    Int ns = sqrt(rat_num(x)), ds = sqrt(rat_den(x));
    if (ns * ns == rat_num(x) && ds * ds == rat_den(x)) return RatInterval::point(Rat(ns, ds));

    unsigned bits = 32;
    while (Rat(1, Int(1) << (bits - 1)) > max_width && bits < 4096) bits *= 2;
    Int scale = Int(1) << bits;
    Int n = floor_div(rat_num(x) * scale * scale, rat_den(x));
    Int r = sqrt(n);  // floor sqrt: r^2 <= n
    Rat lo(r, scale);
    Rat hi(r + 2, scale);  // (r+1)^2 > n >= x*scale^2 - 1, so sqrt(x) < (r+2)/scale
    if (Rat((r + 1) * (r + 1), scale * scale) >= x) hi = Rat(r + 1, scale);
    return RatInterval(lo, hi);
}

inline RatInterval pow_bounds(const Rat& base, const Rat& expo, const Rat& max_width) {
    if (base < 0) throw precondition_error("pow_bounds: negative base");
    if (base == 0) {
        if (expo <= 0) throw precondition_error("pow_bounds: 0 to a nonpositive power");
        return RatInterval::point(Rat(0));
    }
    if (rat_den(expo) == 1) {
        Int n = rat_num(expo);
        if (rat_abs(Rat(n)) <= 1024) return RatInterval::point(pow_rat(base, static_cast<long>(n)));
    }
    if (base == 1) return RatInterval::point(Rat(1));

    for (Rat delta = max_width / 8;; delta /= 16) {
        RatInterval lg = log_bounds(base, delta);
        RatInterval scaled = expo * lg;
        RatInterval out = exp_bounds(scaled, delta);
        if (out.width() <= max_width) return out;
        if (delta < Rat(1, pow_rat(Rat(2), 4096)))
            throw inconclusive_error("pow_bounds: cannot reach requested width");
    }
}

// Monotone in the base for positive exponents.
inline RatInterval pow_bounds(const RatInterval& base, const Rat& expo, const Rat& max_width) {
    if (expo <= 0) throw precondition_error("pow_bounds: interval base needs positive exponent");
    Rat half = max_width / 2;
    RatInterval lo = pow_bounds(base.lo, expo, half);
    RatInterval hi = base.is_point() ? lo : pow_bounds(base.hi, expo, half);
    return RatInterval(lo.lo, hi.hi);
}

}  // namespace prodmeas
