#pragma once

// Classified value of an infinite product of nonnegative reals. A provably
// rational value (including 0, which also covers certified divergence to 0)
// is Exact; a certified enclosure with positive lower end is Interval;
// the remaining outcomes are PlusInfinity and Indeterminate (oscillating
// partial products, first-class by design).

#include <string>

#include "prodmeas/bounds.hpp"
#include "prodmeas/errors.hpp"
#include "prodmeas/rational.hpp"

namespace prodmeas {

class ProductValue {
public:
    enum class Kind { Exact, Interval, PlusInfinity, Indeterminate };

    static ProductValue exact(Rat v) {
        if (v < 0) throw precondition_error("ProductValue: negative exact value");
        ProductValue p;
        p.kind_ = Kind::Exact;
        p.bounds_ = RatInterval::point(v);
        return p;
    }
    static ProductValue zero() { return exact(Rat(0)); }
    static ProductValue interval(RatInterval iv) {
        if (iv.is_point()) return exact(iv.lo);
        if (iv.lo <= 0) throw precondition_error("ProductValue: interval lower end must be positive");
        ProductValue p;
        p.kind_ = Kind::Interval;
        p.bounds_ = std::move(iv);
        return p;
    }
    static ProductValue plus_infinity() {
        ProductValue p;
        p.kind_ = Kind::PlusInfinity;
        return p;
    }
    static ProductValue indeterminate() {
        ProductValue p;
        p.kind_ = Kind::Indeterminate;
        return p;
    }

    Kind kind() const { return kind_; }
    bool is_exact() const { return kind_ == Kind::Exact; }
    bool is_interval() const { return kind_ == Kind::Interval; }
    bool is_finite() const { return is_exact() || is_interval(); }
    bool is_zero() const { return is_exact() && bounds_.lo == 0; }
    bool is_infinite() const { return kind_ == Kind::PlusInfinity; }
    bool is_indeterminate() const { return kind_ == Kind::Indeterminate; }

    const Rat& exact_value() const {
        if (!is_exact()) throw precondition_error("ProductValue: exact_value() on a non-exact value");
        return bounds_.lo;
    }
    const RatInterval& bounds() const {
        if (!is_finite()) throw precondition_error("ProductValue: bounds() on a non-finite value");
        return bounds_;
    }
    const Rat& lower() const { return bounds().lo; }
    const Rat& upper() const { return bounds().hi; }

    friend bool operator==(const ProductValue& a, const ProductValue& b) {
        if (a.kind_ != b.kind_) return false;
        if (a.is_finite()) return a.bounds_.lo == b.bounds_.lo && a.bounds_.hi == b.bounds_.hi;
        return true;
    }

    std::string str() const {
        switch (kind_) {
            case Kind::Exact: return format_rational(bounds_.lo);
            case Kind::Interval: return bounds_.str();
            case Kind::PlusInfinity: return "inf";
            case Kind::Indeterminate: return "indeterminate";
        }
        return {};
    }

private:
    Kind kind_ = Kind::Exact;
    RatInterval bounds_{Rat(0), Rat(0)};
};

// Product with the measure-theoretic convention 0 * inf = 0. A certified
// zero factor wins over everything, including an oscillating one.
inline ProductValue mul_measure(const ProductValue& a, const ProductValue& b) {
    if (a.is_zero() || b.is_zero()) return ProductValue::zero();
    if (a.is_indeterminate() || b.is_indeterminate()) return ProductValue::indeterminate();
    if (a.is_infinite() || b.is_infinite()) return ProductValue::plus_infinity();
    if (a.is_exact() && b.is_exact()) return ProductValue::exact(a.exact_value() * b.exact_value());
    return ProductValue::interval(mul_nonneg(a.bounds(), b.bounds()));
}

// Sum for premeasures. Indeterminate members cannot be summed.
inline ProductValue add_measure(const ProductValue& a, const ProductValue& b) {
    if (a.is_indeterminate() || b.is_indeterminate())
        throw inconclusive_error("sum over an indeterminate product value");
    if (a.is_infinite() || b.is_infinite()) return ProductValue::plus_infinity();
    if (a.is_exact() && b.is_exact()) return ProductValue::exact(a.exact_value() + b.exact_value());
    return ProductValue::interval(a.bounds() + b.bounds());
}

// a <= b provably (upper end of a below lower end of b, or equal exacts).
inline bool certified_le(const ProductValue& a, const ProductValue& b) {
    if (b.is_infinite()) return !a.is_indeterminate();
    if (!a.is_finite() || !b.is_finite()) return false;
    return a.upper() <= b.lower();
}

// The claim "a <= b" is not contradicted by the enclosures.
inline bool consistent_le(const ProductValue& a, const ProductValue& b) {
    if (b.is_infinite()) return !a.is_indeterminate();
    if (!a.is_finite() || !b.is_finite()) return false;
    return a.lower() <= b.upper();
}

}  // namespace prodmeas
