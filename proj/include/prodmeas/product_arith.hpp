#pragma once

// Certified evaluation of infinite products of nonnegative reals, including
// the plus product (split over terms above / not above 1, combined with the
// 0 * inf = 0 convention, empty product 1).
//
// Convergence is never detected automatically: each closed-form family
// carries its own analytic tail certificate, and every emitted enclosure is
// outward-rounded rational arithmetic.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "prodmeas/bounds.hpp"
#include "prodmeas/errors.hpp"
#include "prodmeas/product_value.hpp"
#include "prodmeas/rational.hpp"

namespace prodmeas {

// a_n = 1 - c * r^n (rational terms in (0,1)); sum of |log a_n| tails is
// bounded by 2 c r^{m+1} / (1-r) once c r^{m+1} <= 1/2.
struct OneMinusGeometric {
    Rat c;
    Rat r;
};

// a_n = exp(c * r^n); partial log sums are exact rationals with geometric
// tail bound |c| |r|^{m+1} / (1-|r|). r may be negative (alternating signs).
struct GeometricLog {
    Rat c;
    Rat r;
};

// a_n = exp((-1)^{n+1}/n): the classical product converges (conditionally)
// while both one-sided plus products diverge.
struct AlternatingHarmonicLog {};

using ClosedFormFamily = std::variant<OneMinusGeometric, GeometricLog, AlternatingHarmonicLog>;

struct EventuallyConstant {
    std::vector<Rat> prefix;
    Rat tail;
};

struct Periodic {
    std::vector<Rat> pattern;
};

struct ClosedForm {
    ClosedFormFamily family;
};

class SequenceRule {
public:
    using Body = std::variant<EventuallyConstant, Periodic, ClosedForm>;

    static SequenceRule eventually_constant(std::vector<Rat> prefix, Rat tail) {
        for (const auto& v : prefix)
            if (v < 0) throw precondition_error("sequence rule: negative term");
        if (tail < 0) throw precondition_error("sequence rule: negative tail value");
        return SequenceRule(EventuallyConstant{std::move(prefix), std::move(tail)});
    }
    static SequenceRule constant(Rat value) { return eventually_constant({}, std::move(value)); }
    static SequenceRule periodic(std::vector<Rat> pattern) {
        if (pattern.empty()) throw precondition_error("periodic rule: empty pattern");
        for (const auto& v : pattern)
            if (v < 0) throw precondition_error("sequence rule: negative term");
        return SequenceRule(Periodic{std::move(pattern)});
    }
    static SequenceRule one_minus_geometric(Rat c, Rat r) {
        if (!(c > 0) || !(r > 0) || !(r < 1) || !(c * r < 1))
            throw precondition_error("one_minus_geometric: need c>0, 0<r<1 and c*r<1");
        return SequenceRule(ClosedForm{OneMinusGeometric{std::move(c), std::move(r)}});
    }
    static SequenceRule geometric_log(Rat c, Rat r) {
        if (c == 0 || r == 0 || rat_abs(r) >= 1)
            throw precondition_error("geometric_log: need c!=0 and 0<|r|<1");
        return SequenceRule(ClosedForm{GeometricLog{std::move(c), std::move(r)}});
    }
    static SequenceRule alternating_harmonic_exp() {
        return SequenceRule(ClosedForm{AlternatingHarmonicLog{}});
    }

    const Body& body() const { return body_; }

    // Exact n-th term when it is rational; nullopt for exp-of-rational terms.
    std::optional<Rat> rational_term(std::size_t n) const {
        if (n == 0) throw precondition_error("sequence terms are 1-based");
        if (const auto* ec = std::get_if<EventuallyConstant>(&body_))
            return n <= ec->prefix.size() ? ec->prefix[n - 1] : ec->tail;
        if (const auto* pe = std::get_if<Periodic>(&body_))
            return pe->pattern[(n - 1) % pe->pattern.size()];
        const auto& fam = std::get<ClosedForm>(body_).family;
        if (const auto* omg = std::get_if<OneMinusGeometric>(&fam))
            return Rat(1) - omg->c * pow_rat(omg->r, static_cast<long>(n));
        return std::nullopt;
    }

    // Certified enclosure of the n-th term, any family.
    RatInterval term_bounds(std::size_t n, const Rat& max_width) const {
        if (auto q = rational_term(n)) return RatInterval::point(*q);
        const auto& fam = std::get<ClosedForm>(body_).family;
        if (const auto* gl = std::get_if<GeometricLog>(&fam))
            return exp_bounds(gl->c * pow_rat(gl->r, static_cast<long>(n)), max_width);
        Rat expo = (n % 2 == 1) ? Rat(1, Int(n)) : Rat(-1, Int(n));
        return exp_bounds(expo, max_width);
    }

    // Position of a_n relative to 1 (decidable exactly for every family).
    int term_vs_one(std::size_t n) const {
        if (auto q = rational_term(n)) return *q < 1 ? -1 : (*q == 1 ? 0 : 1);
        const auto& fam = std::get<ClosedForm>(body_).family;
        if (const auto* gl = std::get_if<GeometricLog>(&fam)) {
            Rat e = gl->c * pow_rat(gl->r, static_cast<long>(n));
            return e < 0 ? -1 : (e == 0 ? 0 : 1);
        }
        return n % 2 == 1 ? 1 : -1;  // exp(+1/n) vs exp(-1/n)
    }

    // The rule for the shifted sequence n -> a_{k+n}. Every rational-term
    // family is closed under shifts; the alternating-harmonic family is not.
    SequenceRule shifted(std::size_t k) const {
        if (k == 0) return *this;
        if (const auto* ec = std::get_if<EventuallyConstant>(&body_)) {
            std::vector<Rat> prefix(ec->prefix.begin() + std::min(k, ec->prefix.size()),
                                    ec->prefix.end());
            return eventually_constant(std::move(prefix), ec->tail);
        }
        if (const auto* pe = std::get_if<Periodic>(&body_)) {
            std::vector<Rat> rotated;
            std::size_t len = pe->pattern.size();
            for (std::size_t i = 0; i < len; ++i) rotated.push_back(pe->pattern[(i + k) % len]);
            return periodic(std::move(rotated));
        }
        const auto& fam = std::get<ClosedForm>(body_).family;
        if (const auto* omg = std::get_if<OneMinusGeometric>(&fam))
            return one_minus_geometric(omg->c * pow_rat(omg->r, static_cast<long>(k)), omg->r);
        if (const auto* gl = std::get_if<GeometricLog>(&fam))
            return geometric_log(gl->c * pow_rat(gl->r, static_cast<long>(k)), gl->r);
        throw precondition_error("sequence rule: alternating_harmonic_exp cannot be shifted");
    }

    friend bool operator==(const SequenceRule& a, const SequenceRule& b) {
        if (a.body_.index() != b.body_.index()) return false;
        if (const auto* ec = std::get_if<EventuallyConstant>(&a.body_)) {
            const auto& o = std::get<EventuallyConstant>(b.body_);
            return ec->prefix == o.prefix && ec->tail == o.tail;
        }
        if (const auto* pe = std::get_if<Periodic>(&a.body_))
            return pe->pattern == std::get<Periodic>(b.body_).pattern;
        const auto& fa = std::get<ClosedForm>(a.body_).family;
        const auto& fb = std::get<ClosedForm>(b.body_).family;
        if (fa.index() != fb.index()) return false;
        if (const auto* omg = std::get_if<OneMinusGeometric>(&fa)) {
            const auto& o = std::get<OneMinusGeometric>(fb);
            return omg->c == o.c && omg->r == o.r;
        }
        if (const auto* gl = std::get_if<GeometricLog>(&fa)) {
            const auto& o = std::get<GeometricLog>(fb);
            return gl->c == o.c && gl->r == o.r;
        }
        return true;
    }

private:
    explicit SequenceRule(Body b) : body_(std::move(b)) {}
    Body body_;
};

inline Rat partial_product(const SequenceRule& rule, std::size_t m) {
    Rat acc(1);
    for (std::size_t n = 1; n <= m; ++n) {
        auto q = rule.rational_term(n);
        if (!q)
            throw precondition_error(
                "partial_product: closed-form family has irrational terms; "
                "only certified classification is available");
        acc *= *q;
    }
    return acc;
}

namespace detail {

// Enclosure of sum_{n>=1} (-1)^{n+1}/n at pairing depth M: the paired terms
// 1/((2k-1)2k) are summed outward on a 2^-bits dyadic grid and the tail is
// sandwiched between the telescoping series 1/(2k(2k+2)) and 1/((2k-2)2k),
// giving lim in [S_lo + 1/(4(M+1)), S_hi + 1/(4M)].
inline RatInterval alt_harmonic_log_bounds(std::size_t pairs, unsigned bits) {
    Int scale = Int(1) << bits;
    Int lo_acc = 0, hi_acc = 0;
    for (std::size_t k = 1; k <= pairs; ++k) {
        Int den = Int(2 * k - 1) * Int(2 * k);
        lo_acc += floor_div(scale, den);
        hi_acc += ceil_div(scale, den);
    }
    Rat lo = Rat(lo_acc, scale) + Rat(1, Int(4) * Int(pairs + 1));
    Rat hi = Rat(hi_acc, scale) + Rat(1, Int(4) * Int(pairs));
    return RatInterval(lo, hi);
}

inline ProductValue classify_family(const ClosedFormFamily& fam, const Rat& precision) {
    if (const auto* omg = std::get_if<OneMinusGeometric>(&fam)) {
        // Exact partial product times exp of the certified log tail.
        Rat partial(1);
        std::size_t m = 0;
        Rat crn = omg->c * omg->r;  // c * r^{m+1} for current m
        const Rat eighth = precision / 8;
        while (true) {
            Rat tail_bound = 2 * crn / (1 - omg->r);
            if (crn <= Rat(1, 2) && tail_bound <= eighth) {
                RatInterval down = exp_bounds(-tail_bound, eighth);
                RatInterval up = exp_bounds(tail_bound, eighth);
                RatInterval enclosure(partial * down.lo, partial * up.hi);
                if (enclosure.width() <= precision) return ProductValue::interval(enclosure);
            }
            ++m;
            partial *= Rat(1) - crn;
            crn *= omg->r;
            if (m > 1u << 20)
                throw inconclusive_error("one_minus_geometric: certificate did not reach precision");
        }
    }
    if (const auto* gl = std::get_if<GeometricLog>(&fam)) {
        const Rat abs_r = rat_abs(gl->r);
        std::size_t m = 1;
        while (true) {
            // L(m) = c * r (1 - r^m) / (1 - r), |tail| <= |c| |r|^{m+1} / (1-|r|)
            Rat rm = pow_rat(gl->r, static_cast<long>(m));
            Rat log_sum = gl->c * gl->r * (1 - rm) / (1 - gl->r);
            Rat bound = rat_abs(gl->c) * rat_abs(rm) * abs_r / (1 - abs_r);
            RatInterval enc = exp_bounds(RatInterval(log_sum - bound, log_sum + bound), precision / 2);
            if (enc.width() <= precision) return ProductValue::interval(enc);
            m *= 2;
            if (m > 1u << 20)
                throw inconclusive_error("geometric_log: certificate did not reach precision");
        }
    }
    // Alternating harmonic exponents.
    for (std::size_t pairs = 1024;; pairs *= 2) {
        RatInterval logs = alt_harmonic_log_bounds(pairs, 128);
        RatInterval enc = exp_bounds(logs, precision / 2);
        if (enc.width() <= precision) return ProductValue::interval(enc);
        if (pairs > (1u << 26))
            throw inconclusive_error("alternating_harmonic_exp: did not reach precision");
    }
}

// Products over {n : a_n > 1} and its complement, certified per family.
inline std::pair<ProductValue, ProductValue> plus_split_family(const ClosedFormFamily& fam,
                                                               const Rat& precision) {
    if (std::holds_alternative<OneMinusGeometric>(fam)) {
        // every term sits in (0,1): the "above 1" side is empty
        return {ProductValue::exact(Rat(1)), classify_family(fam, precision)};
    }
    if (const auto* gl = std::get_if<GeometricLog>(&fam)) {
        if (gl->r > 0) {
            auto whole = classify_family(fam, precision);
            return gl->c > 0 ? std::make_pair(whole, ProductValue::exact(Rat(1)))
                             : std::make_pair(ProductValue::exact(Rat(1)), whole);
        }
        // Alternating signs: even indices follow exp(c (r^2)^k), odd ones
        // exp((c/r) (r^2)^k); both subfamilies are certified geometric logs.
        ClosedFormFamily evens = GeometricLog{gl->c, gl->r * gl->r};
        ClosedFormFamily odds = GeometricLog{gl->c / gl->r, gl->r * gl->r};
        ProductValue even_val = classify_family(evens, precision / 2);
        ProductValue odd_val = classify_family(odds, precision / 2);
        bool even_above = gl->c > 0;  // c r^{2k} has the sign of c
        ProductValue above = even_above ? even_val : odd_val;
        ProductValue below = even_above ? odd_val : even_val;
        return {above, below};
    }
    // exp(sum of odd harmonic terms) diverges; exp(-sum of even ones) is 0.
    return {ProductValue::plus_infinity(), ProductValue::zero()};
}

}  // namespace detail

inline ProductValue classify_product(const SequenceRule& rule, const Rat& precision) {
    if (precision <= 0) throw precondition_error("classify_product: precision must be positive");

    if (const auto* ec = std::get_if<EventuallyConstant>(&rule.body())) {
        Rat prefix_prod(1);
        for (const auto& v : ec->prefix) prefix_prod *= v;
        if (prefix_prod == 0) return ProductValue::zero();
        if (ec->tail == 1) return ProductValue::exact(prefix_prod);
        if (ec->tail > 1) return ProductValue::plus_infinity();
        return ProductValue::zero();  // tail in [0,1): partial products vanish
    }
    if (const auto* pe = std::get_if<Periodic>(&rule.body())) {
        Rat pattern_prod(1);
        bool constant_one = true;
        for (const auto& v : pe->pattern) {
            pattern_prod *= v;
            constant_one = constant_one && v == 1;
        }
        if (pattern_prod == 0) return ProductValue::zero();
        if (pattern_prod > 1) return ProductValue::plus_infinity();
        if (pattern_prod < 1) return ProductValue::zero();
        if (constant_one) return ProductValue::exact(Rat(1));
        return ProductValue::indeterminate();  // cycle of distinct partial products
    }
    return detail::classify_family(std::get<ClosedForm>(rule.body()).family, precision);
}

inline ProductValue plus_product(const SequenceRule& rule, const Rat& precision = Rat(1, 1000000)) {
    if (precision <= 0) throw precondition_error("plus_product: precision must be positive");

    if (const auto* ec = std::get_if<EventuallyConstant>(&rule.body())) {
        Rat above(1), below(1);
        for (const auto& v : ec->prefix) (v > 1 ? above : below) *= v;
        ProductValue above_val =
            ec->tail > 1 ? ProductValue::plus_infinity() : ProductValue::exact(above);
        ProductValue below_val = ProductValue::exact(below);
        if (ec->tail < 1) below_val = ProductValue::zero();
        return mul_measure(above_val, below_val);
    }
    if (const auto* pe = std::get_if<Periodic>(&rule.body())) {
        bool has_above = false, has_below = false;
        for (const auto& v : pe->pattern) {
            has_above = has_above || v > 1;
            has_below = has_below || v < 1;
        }
        ProductValue above_val =
            has_above ? ProductValue::plus_infinity() : ProductValue::exact(Rat(1));
        ProductValue below_val = has_below ? ProductValue::zero() : ProductValue::exact(Rat(1));
        return mul_measure(above_val, below_val);
    }
    auto [above, below] =
        detail::plus_split_family(std::get<ClosedForm>(rule.body()).family, precision);
    return mul_measure(above, below);
}

// Certified value of prod a_n given a_n <= b_n termwise and a finiteness
// certificate for prod b_n; the prefix inequality is checked exactly (or by
// refinable enclosures), the tails are asserted by rule construction.
inline ProductValue compare_products(const SequenceRule& rule_a, const SequenceRule& rule_b,
                                     const Rat& precision = Rat(1, 1000000000),
                                     std::size_t prefix_check = 64) {
    for (std::size_t n = 1; n <= prefix_check; ++n) {
        auto qa = rule_a.rational_term(n);
        auto qb = rule_b.rational_term(n);
        if (qa && qb) {
            if (*qa > *qb)
                throw precondition_error("compare_products: a_n > b_n at n=" + std::to_string(n));
            continue;
        }
        Rat width(1, 1024);
        bool decided = false;
        for (int round = 0; round < 3 && !decided; ++round, width /= 1024) {
            RatInterval ia = rule_a.term_bounds(n, width);
            RatInterval ib = rule_b.term_bounds(n, width);
            if (ia.hi <= ib.lo) decided = true;  // a_n <= b_n certified
            else if (ia.lo > ib.hi)
                throw precondition_error("compare_products: a_n > b_n at n=" + std::to_string(n));
        }
        // undecided enclosures: accept only structurally equal rules
        if (!decided && !(rule_a.body().index() == rule_b.body().index()))
            throw inconclusive_error("compare_products: cannot certify a_n <= b_n at n=" +
                                     std::to_string(n));
    }

    ProductValue b_val = classify_product(rule_b, precision);
    if (!b_val.is_finite())
        throw precondition_error("compare_products: certificate does not establish a finite bound");
    ProductValue a_val = classify_product(rule_a, precision);
    if (a_val.is_infinite() || a_val.is_indeterminate())
        throw precondition_error("compare_products: comparison contradicts classification of a");
    if (!consistent_le(a_val, b_val))
        throw precondition_error("compare_products: enclosures contradict a <= b");
    return a_val;
}

}  // namespace prodmeas
