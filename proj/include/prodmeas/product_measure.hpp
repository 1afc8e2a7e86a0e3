#pragma once

// The premeasure / outer-measure layer: exact values on the algebra of
// finite disjoint rectangle unions, Caratheodory split checks against
// cylinders, certified upper bounds from user-supplied cover prefixes,
// translation, and the family of disjoint unit-measure rectangles witnessing
// the failure of sigma-finiteness.
//
// The outer measure itself (infimum over all countable covers) is not
// computable; on the algebra it coincides with the premeasure, and covers
// only ever yield certified upper bounds.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prodmeas/errors.hpp"
#include "prodmeas/rectangle.hpp"

namespace prodmeas {

// A representative point of a nonempty rectangle, explicit out to `depth`
// coordinates (at least the head), following the tail sets beyond.
inline std::vector<Coord> sample_point(const Rectangle& r, std::size_t depth = 0) {
    if (r.is_empty()) throw precondition_error("sample_point: empty rectangle");
    depth = std::max(depth, r.head_size());
    std::vector<Coord> coords;
    for (std::size_t i = 1; i <= depth; ++i) {
        const FactorSpace& factor = r.factors()->at(i);
        GeneratorSet s = r.set_at(i);
        if (factor.kind == FactorKind::Discrete) {
            if (s.is_full())
                coords.push_back(Coord::named(factor.atoms.front().first));
            else
                coords.push_back(Coord::named(s.atom_names().front()));
            continue;
        }
        if (s.is_full()) {
            coords.push_back(Coord::at(Rat(0)));
        } else if (s.tag() == GeneratorSet::Tag::CoPieces) {
            coords.push_back(Coord::at(s.intervals().back().hi));  // just past the holes
        } else {
            const HalfOpen& p = s.intervals().front();
            coords.push_back(Coord::at((p.lo + p.hi) / 2));
        }
    }
    return coords;
}

inline std::string point_str(const std::vector<Coord>& coords) {
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ", ";
        out += coords[i].is_atom ? coords[i].atom : format_rational(coords[i].x);
    }
    return out + ", ...)";
}

// ---------------------------------------------------------------------------

// Exact measure of a finite disjoint union. Disjointness is what RectUnion
// certifies; the vector overload re-validates rather than trusting callers.
inline ProductValue premeasure(const RectUnion& u, const Rat& precision = Rat(1, 1000000000)) {
    ProductValue total = ProductValue::exact(Rat(0));
    for (const auto& r : u.members()) total = add_measure(total, vol(r, precision));
    return total;
}

inline ProductValue premeasure(const std::vector<Rectangle>& members,
                               const Rat& precision = Rat(1, 1000000000)) {
    if (auto w = verify_pairwise_disjoint(members)) {
        Rectangle overlap = intersect(members[w->first], members[w->second]);
        throw precondition_error("premeasure: members " + std::to_string(w->first + 1) + " and " +
                                 std::to_string(w->second + 1) + " overlap near " +
                                 point_str(sample_point(overlap)));
    }
    return premeasure(RectUnion::of(members), precision);
}

// ---------------------------------------------------------------------------
// Caratheodory split against a cylinder

struct SplitCheck {
    ProductValue lhs;      // mu(b)
    ProductValue rhs_in;   // mu(b into c)
    ProductValue rhs_out;  // mu(b into the complement of c)
    bool equal = false;
};

// mu(b) = mu(b inside c) + mu(b outside c), exactly on the algebra. The
// complement of a cylinder is a finite disjoint cylinder union, so both
// right-hand terms stay inside the algebra.
inline SplitCheck split_check(const RectUnion& b, const Rectangle& c,
                              const Rat& precision = Rat(1, 1000000000)) {
    if (!std::holds_alternative<FullTail>(c.tail()))
        throw precondition_error("split_check: the splitting set must be a cylinder");

    SplitCheck out;
    out.lhs = premeasure(b, precision);
    if (!out.lhs.is_finite())
        throw precondition_error("split_check: b must have finite measure");

    std::vector<Rectangle> inside;
    for (const auto& member : b.members()) {
        Rectangle piece = intersect(member, c);
        if (!piece.is_empty()) inside.push_back(std::move(piece));
    }

    ComplementStream comp = complement_stream(c, c.head_size() + 1);
    if (!comp.exhausted) throw precondition_error("split_check: cylinder complement not finite");
    std::vector<Rectangle> outside;
    for (const auto& member : b.members())
        for (const auto& term : comp.terms) {
            Rectangle piece = intersect(member, term);
            if (!piece.is_empty()) outside.push_back(std::move(piece));
        }

    out.rhs_in = premeasure(RectUnion::of(std::move(inside)), precision);
    out.rhs_out = premeasure(RectUnion::of(std::move(outside)), precision);

    if (!out.lhs.is_exact() || !out.rhs_in.is_exact() || !out.rhs_out.is_exact())
        throw inconclusive_error("split_check: non-exact member volumes");
    out.equal = out.lhs.exact_value() == out.rhs_in.exact_value() + out.rhs_out.exact_value();
    return out;
}

// ---------------------------------------------------------------------------
// Cover prefixes and the subadditivity bound

struct CoverPrefix {
    std::vector<Rectangle> cover;  // first terms of a countable cover
    RectUnion target;
};

struct CoverBound {
    ProductValue bound;             // sum of cover volumes >= outer measure
    ProductValue exact;             // premeasure of the target (it lies in the algebra)
    std::optional<Rat> slack;       // bound - exact when both are exact rationals
};

namespace detail {

// Does the target tail fit inside the cover element's tail coordinatewise
// beyond the common head?
inline bool tail_covered(const Rectangle& target, const Rectangle& element, std::size_t h) {
    const TailSpec& tt = target.tail();
    const TailSpec& te = element.tail();
    if (std::holds_alternative<FullTail>(te)) return true;
    if (tails_equal(tt, te)) return true;
    const auto* ut = std::get_if<UnitTail>(&tt);
    const auto* ue = std::get_if<UnitTail>(&te);
    if (ut && ue) return set_is_subset(target.factors()->at(h + 1), ut->set, ue->set);
    return false;
}

}  // namespace detail

// Verifies that the prefix covers the target via head refinement, then sums
// the cover volumes: a certified upper bound on the outer measure, compared
// with the exact value on the algebra.
inline CoverBound subadditivity_bound(const CoverPrefix& cp,
                                      const Rat& precision = Rat(1, 1000000000)) {
    if (cp.target.empty()) {
        CoverBound out;
        out.exact = ProductValue::exact(Rat(0));
        out.bound = ProductValue::exact(Rat(0));
        for (const auto& e : cp.cover) out.bound = add_measure(out.bound, vol(e, precision));
        if (out.bound.is_exact()) out.slack = out.bound.exact_value();
        return out;
    }

    const FactorSeqPtr& factors = cp.target.members().front().factors();
    for (const auto& e : cp.cover)
        if (!same_factors(factors, e.factors()))
            throw precondition_error("cover-bound: different factor sequences");

    // Refine head coordinates over the target AND cover boundaries, then
    // demand that every atom of the target sit inside some cover element
    // (head cells plus tail comparison).
    const auto& targets = cp.target.members();
    std::size_t h = 0;
    for (const auto& m : targets) h = std::max(h, m.head_size());
    for (const auto& e : cp.cover) h = std::max(h, e.head_size());

    std::vector<std::vector<GeneratorSet>> cells(h);
    std::size_t total = 1;
    for (std::size_t i = 1; i <= h; ++i) {
        std::vector<GeneratorSet> sets;
        for (const auto& m : targets) sets.push_back(m.set_at(i));
        for (const auto& e : cp.cover) sets.push_back(e.set_at(i));
        cells[i - 1] = detail::coordinate_cells(factors->at(i), sets);
        total *= std::max<std::size_t>(cells[i - 1].size(), 1);
        if (total > (1u << 20)) throw precondition_error("cover-bound: refinement too large");
    }

    std::vector<std::size_t> idx(h, 0);
    while (true) {
        std::vector<GeneratorSet> atom;
        for (std::size_t i = 0; i < h; ++i) atom.push_back(cells[i][idx[i]]);

        auto inside = [&](const Rectangle& r) {
            for (std::size_t i = 1; i <= std::max(h, r.head_size()); ++i) {
                GeneratorSet cell = i <= h ? atom[i - 1] : GeneratorSet::full();
                if (!set_is_subset(factors->at(i), cell, r.set_at(i))) return false;
            }
            return true;
        };

        const Rectangle* owner = nullptr;
        for (const auto& m : targets)
            if (inside(m)) {
                owner = &m;
                break;
            }
        if (owner) {
            bool covered = false;
            for (const auto& e : cp.cover)
                if (inside(e) && detail::tail_covered(*owner, e, h)) {
                    covered = true;
                    break;
                }
            if (!covered) {
                Rectangle witness(factors, atom, owner->tail());
                throw precondition_error("cover-bound: prefix does not cover the target; witness " +
                                         point_str(sample_point(witness, h)));
            }
        }
        std::size_t c = 0;
        while (c < h && ++idx[c] == cells[c].size()) {
            idx[c] = 0;
            ++c;
        }
        if (c == h) break;
    }

    CoverBound out;
    out.bound = ProductValue::exact(Rat(0));
    for (const auto& e : cp.cover) out.bound = add_measure(out.bound, vol(e, precision));
    out.exact = premeasure(cp.target, precision);
    if (out.bound.is_exact() && out.exact.is_exact())
        out.slack = out.bound.exact_value() - out.exact.exact_value();
    return out;
}

// ---------------------------------------------------------------------------
// Translation

// Coordinatewise shift with finite support; every touched coordinate must be
// a Line factor. Volume is preserved exactly.
inline Rectangle translate_rect(const Rectangle& r, const std::map<std::size_t, Rat>& shift) {
    std::size_t h = r.head_size();
    for (const auto& [i, delta] : shift) {
        if (i == 0) throw precondition_error("translate_rect: coordinates are 1-based");
        if (delta != 0) h = std::max(h, i);
    }
    std::vector<GeneratorSet> head;
    for (std::size_t i = 1; i <= h; ++i) {
        GeneratorSet s = r.set_at(i);
        auto it = shift.find(i);
        if (it != shift.end() && it->second != 0)
            s = translate_set(r.factors()->at(i), s, it->second);
        head.push_back(std::move(s));
    }
    return Rectangle(r.factors(), std::move(head), r.tail());
}

// ---------------------------------------------------------------------------
// Non-sigma-finiteness witness family

// 2^k pairwise disjoint rectangles of measure exactly 1: each bit chooses
// between the unit-measure sets [0,1) and [1,2) on a Line coordinate.
inline std::vector<Rectangle> binary_family(const FactorSeqPtr& factors, std::size_t k) {
    if (k == 0) throw precondition_error("binary_family: k must be at least 1");
    if (k > 24) throw precondition_error("binary_family: k too large");
    for (std::size_t i = 1; i <= k; ++i)
        if (factors->at(i).kind != FactorKind::Line)
            throw precondition_error("binary_family: coordinates 1..k must be Line factors");

    GeneratorSet a = GeneratorSet::interval(Rat(0), Rat(1));
    GeneratorSet b = GeneratorSet::interval(Rat(1), Rat(2));
    std::vector<Rectangle> out;
    out.reserve(std::size_t{1} << k);
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        std::vector<GeneratorSet> head;
        for (std::size_t i = 0; i < k; ++i) head.push_back((bits >> i) & 1 ? b : a);
        out.emplace_back(factors, std::move(head), UnitTail{a});
    }
    return out;
}

}  // namespace prodmeas
