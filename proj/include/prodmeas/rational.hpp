#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "prodmeas/errors.hpp"

namespace prodmeas {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return numerator(q); }
inline Int rat_den(const Rat& q) { return denominator(q); }

// q^e for integer e (e < 0 requires q != 0).
inline Rat pow_rat(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    if (q == 0) {
        if (e < 0) throw precondition_error("pow_rat: 0 to a negative power");
        return Rat(0);
    }
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-(e + 1)) + 1ul : static_cast<unsigned long>(e);
    Rat base = q, acc(1);
    while (k != 0) {
        if (k & 1ul) acc *= base;
        base *= base;
        k >>= 1;
    }
    if (inv) acc = Rat(1) / acc;
    return acc;
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int rat_floor(const Rat& q) { return floor_div(rat_num(q), rat_den(q)); }
inline Int rat_ceil(const Rat& q) { return ceil_div(rat_num(q), rat_den(q)); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Largest multiple of 2^-bits that is <= q. Keeps certified sums on a fixed
// dyadic grid so denominators never grow past 2^bits.
inline Rat dyadic_floor(const Rat& q, unsigned bits) {
    Int scale = Int(1) << bits;
    return Rat(floor_div(rat_num(q) * scale, rat_den(q)), scale);
}

inline Rat dyadic_ceil(const Rat& q, unsigned bits) {
    Int scale = Int(1) << bits;
    return Rat(ceil_div(rat_num(q) * scale, rat_den(q)), scale);
}

// Strict "n", "-n" or "n/d" with d > 0 after sign normalisation.
inline Rat parse_rational(const std::string& text) {
    const auto bad = [&] { throw parse_error("not a rational: \"" + text + "\""); };
    if (text.empty()) bad();
    std::size_t i = 0;
    if (text[i] == '-') ++i;
    if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) bad();
    std::size_t slash = std::string::npos;
    for (std::size_t j = i; j < text.size(); ++j) {
        char c = text[j];
        if (c == '/') {
            if (slash != std::string::npos || j + 1 == text.size()) bad();
            slash = j;
        } else if (!std::isdigit(static_cast<unsigned char>(c))) {
            bad();
        }
    }
    if (slash != std::string::npos && slash == i) bad();
    try {
        if (slash == std::string::npos) return Rat(Int(text));
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) bad();
        return Rat(num, den);
    } catch (const std::exception&) {
        bad();
    }
    return Rat(0);  // unreachable
}

inline std::string format_rational(const Rat& q) {
    std::string s = rat_num(q).str();
    if (rat_den(q) != 1) s += "/" + rat_den(q).str();
    return s;
}

// Value in [0, +inf]: what a one-dimensional measure evaluation returns.
class ExtRat {
public:
    static ExtRat finite(Rat v) {
        if (v < 0) throw precondition_error("ExtRat: negative measure value");
        ExtRat e;
        e.value_ = std::move(v);
        return e;
    }
    static ExtRat infinity() {
        ExtRat e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    const Rat& value() const {
        if (infinite_) throw precondition_error("ExtRat: value() on +inf");
        return value_;
    }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return finite(a.value_ + b.value_);
    }
    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.infinite_ != b.infinite_) return false;
        return a.infinite_ || a.value_ == b.value_;
    }
    friend bool operator==(const ExtRat& a, const Rat& b) { return !a.infinite_ && a.value_ == b; }

    std::string str() const { return infinite_ ? "inf" : format_rational(value_); }

private:
    bool infinite_ = false;
    Rat value_{0};
};

}  // namespace prodmeas
