#pragma once

// Cylinder rectangles and finite-volume rectangles over a shared factor
// sequence: finitely many explicit head constraints plus a tail rule. A
// rectangle with a full tail is a cylinder; one whose volume classifies as
// finite belongs to the finite-volume family. The complement of a rectangle
// is a countable disjoint union of cylinders, exposed here as a stream with
// an explicit exhaustion flag.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "prodmeas/errors.hpp"
#include "prodmeas/factor_space.hpp"
#include "prodmeas/product_arith.hpp"
#include "prodmeas/product_value.hpp"

namespace prodmeas {

struct FullTail {
    friend bool operator==(const FullTail&, const FullTail&) { return true; }
};

// One fixed set, measure exactly 1, repeated over every tail coordinate.
struct UnitTail {
    GeneratorSet set;
    friend bool operator==(const UnitTail& a, const UnitTail& b) { return a.set == b.set; }
};

// Sets [origin, origin + w_i) whose widths follow a rational-term sequence
// rule; the rule doubles as the certificate for the tail measure product.
struct GeneralTail {
    Rat origin;
    SequenceRule widths;
    friend bool operator==(const GeneralTail& a, const GeneralTail& b) {
        return a.origin == b.origin && a.widths == b.widths;
    }
};

using TailSpec = std::variant<FullTail, UnitTail, GeneralTail>;

inline bool tails_equal(const TailSpec& a, const TailSpec& b) { return a == b; }

class Rectangle {
public:
    Rectangle(FactorSeqPtr factors, std::vector<GeneratorSet> head, TailSpec tail)
        : factors_(std::move(factors)), head_(std::move(head)), tail_(std::move(tail)) {
        if (!factors_) throw precondition_error("rectangle: missing factor sequence");
        validate();
        canonicalize_rep();
    }

    static Rectangle full_space(FactorSeqPtr factors) {
        return Rectangle(std::move(factors), {}, FullTail{});
    }
    static Rectangle empty_set(FactorSeqPtr factors) {
        return Rectangle(std::move(factors), {GeneratorSet::empty()}, FullTail{});
    }

    const FactorSeqPtr& factors() const { return factors_; }
    const std::vector<GeneratorSet>& head() const { return head_; }
    std::size_t head_size() const { return head_.size(); }
    const TailSpec& tail() const { return tail_; }

    bool is_cylinder() const { return std::holds_alternative<FullTail>(tail_); }
    bool is_empty() const {
        return std::any_of(head_.begin(), head_.end(),
                           [&](const GeneratorSet& s) { return s.is_empty_rep(); });
    }

    // The constraint set at coordinate i (1-based), head or tail.
    GeneratorSet set_at(std::size_t i) const {
        if (i == 0) throw precondition_error("rectangle coordinates are 1-based");
        if (i <= head_.size()) return head_[i - 1];
        return tail_set_at(i);
    }

    GeneratorSet tail_set_at(std::size_t i) const {
        if (const auto* ut = std::get_if<UnitTail>(&tail_)) return ut->set;
        if (const auto* gt = std::get_if<GeneralTail>(&tail_)) {
            Rat w = *gt->widths.rational_term(i);
            return canonicalize(factors_->at(i),
                                GeneratorSet::interval(gt->origin, gt->origin + w));
        }
        return GeneratorSet::full();
    }

    // Smallest index such that every constraint set beyond it is the whole
    // factor space; nullopt when constraints never become trivial.
    std::optional<std::size_t> all_full_beyond() const {
        if (is_empty()) return head_.size();  // canonical empty: complement terms stop
        if (std::holds_alternative<FullTail>(tail_)) return head_.size();
        if (const auto* gt = std::get_if<GeneralTail>(&tail_)) {
            if (const auto* ec = std::get_if<EventuallyConstant>(&gt->widths.body())) {
                if (gt->origin == 0 && ec->tail == 1 &&
                    factors_->at(ec->prefix.size() + 1).kind == FactorKind::UnitInterval &&
                    factors_->prefix_size() <= ec->prefix.size())
                    return std::max(head_.size(), ec->prefix.size());
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const Rectangle& a, const Rectangle& b) {
        if (a.is_empty() && b.is_empty() && same_factors(a.factors_, b.factors_)) return true;
        return same_factors(a.factors_, b.factors_) && a.head_ == b.head_ && a.tail_ == b.tail_;
    }
    friend bool operator<(const Rectangle& a, const Rectangle& b) {
        if (a.head_.size() != b.head_.size()) return a.head_.size() < b.head_.size();
        if (a.head_ != b.head_)
            return std::lexicographical_compare(a.head_.begin(), a.head_.end(), b.head_.begin(),
                                                b.head_.end());
        return a.tail_.index() < b.tail_.index();
    }

private:
    void validate() {
        for (std::size_t i = 1; i <= head_.size(); ++i) {
            validate_set(factors_->at(i), head_[i - 1]);
            head_[i - 1] = prodmeas::canonicalize(factors_->at(i), head_[i - 1]);
        }
        if (auto* ut = std::get_if<UnitTail>(&tail_)) {
            // Exactness of everything downstream hinges on unit tail measure.
            std::size_t check_to = std::max(head_.size(), factors_->prefix_size()) + 1;
            for (std::size_t i = head_.size() + 1; i <= check_to; ++i) {
                ut->set = prodmeas::canonicalize(factors_->at(i), ut->set);
                if (!(measure(factors_->at(i), ut->set) == Rat(1)))
                    throw precondition_error("unit tail: set measure is not 1 at coordinate " +
                                             std::to_string(i));
            }
            if (ut->set.is_full()) tail_ = FullTail{};
        } else if (const auto* gt = std::get_if<GeneralTail>(&tail_)) {
            std::size_t check_to = std::max({head_.size(), factors_->prefix_size(), std::size_t{8}});
            for (std::size_t i = head_.size() + 1; i <= check_to + 8; ++i) {
                auto w = gt->widths.rational_term(i);
                if (!w) throw precondition_error("general tail: widths must be rational terms");
                if (*w <= 0) throw precondition_error("general tail: width must be positive");
                validate_set(factors_->at(i),
                             GeneratorSet::interval(gt->origin, gt->origin + *w));
            }
        }
    }

    // No trailing head coordinate equal to the tail rule's set there; an
    // empty rectangle collapses to the single empty constraint.
    void canonicalize_rep() {
        if (is_empty()) {
            head_ = {GeneratorSet::empty()};
            tail_ = FullTail{};
            return;
        }
        while (!head_.empty() && head_.back() == tail_set_at(head_.size())) head_.pop_back();
    }

    FactorSeqPtr factors_;
    std::vector<GeneratorSet> head_;
    TailSpec tail_;
};

// ---------------------------------------------------------------------------
// Volume

// vol = product over all coordinates of the factor measures: exact head part
// times the classified tail product. A zero coordinate wins over everything
// (measure convention); an oscillating tail with nonzero head has no volume.
inline ProductValue vol(const Rectangle& r, const Rat& precision = Rat(1, 1000000000)) {
    if (r.is_empty()) return ProductValue::zero();

    ProductValue head_part = ProductValue::exact(Rat(1));
    for (std::size_t i = 1; i <= r.head_size(); ++i) {
        ExtRat m = measure(r.factors()->at(i), r.head()[i - 1]);
        ProductValue factor = m.is_infinite() ? ProductValue::plus_infinity()
                                              : ProductValue::exact(m.value());
        head_part = mul_measure(head_part, factor);
    }
    if (head_part.is_zero()) return head_part;

    ProductValue tail_part = ProductValue::exact(Rat(1));
    if (std::holds_alternative<FullTail>(r.tail())) {
        std::size_t m = r.head_size();
        // explicit factors beyond the head contribute their total masses,
        // then the repeated template decides the rest
        for (std::size_t i = m + 1; i <= r.factors()->prefix_size(); ++i) {
            ExtRat mass = measure(r.factors()->at(i), GeneratorSet::full());
            tail_part = mul_measure(tail_part, mass.is_infinite()
                                                   ? ProductValue::plus_infinity()
                                                   : ProductValue::exact(mass.value()));
        }
        const FactorSpace& tmpl = r.factors()->tail_template();
        ExtRat mass = measure(tmpl, GeneratorSet::full());
        if (mass.is_infinite() || mass.value() > 1)
            tail_part = mul_measure(tail_part, ProductValue::plus_infinity());
        else if (mass.value() < 1)
            tail_part = mul_measure(tail_part, ProductValue::zero());
    } else if (const auto* gt = std::get_if<GeneralTail>(&r.tail())) {
        ProductValue tail_prod =
            classify_product(gt->widths.shifted(r.head_size()), precision);
        if (tail_prod.is_indeterminate())
            throw inconclusive_error("vol: tail measure product is indeterminate");
        tail_part = mul_measure(tail_part, tail_prod);
    }
    return mul_measure(head_part, tail_part);
}

// ---------------------------------------------------------------------------
// Intersection

namespace detail {

// Tail combinations supported for pairwise operations: a full tail against
// anything, otherwise structurally equal tails.
inline const TailSpec& combine_tails(const TailSpec& a, const TailSpec& b) {
    if (std::holds_alternative<FullTail>(a)) return b;
    if (std::holds_alternative<FullTail>(b)) return a;
    if (tails_equal(a, b)) return a;
    throw precondition_error("unsupported tail combination");
}

}  // namespace detail

inline Rectangle intersect(const Rectangle& r1, const Rectangle& r2) {
    if (!same_factors(r1.factors(), r2.factors()))
        throw precondition_error("intersect: different factor sequences");
    TailSpec tail = detail::combine_tails(r1.tail(), r2.tail());
    std::size_t h = std::max(r1.head_size(), r2.head_size());
    std::vector<GeneratorSet> head;
    head.reserve(h);
    for (std::size_t i = 1; i <= h; ++i)
        head.push_back(set_intersect(r1.factors()->at(i), r1.set_at(i), r2.set_at(i)));
    return Rectangle(r1.factors(), std::move(head), tail);
}

// ---------------------------------------------------------------------------
// Complement stream (countable disjoint cylinder decomposition)

struct ComplementStream {
    std::vector<Rectangle> terms;
    bool exhausted = false;
};

// First `depth` nonempty terms of the complement decomposition: the n-th
// term constrains coordinates below n to the rectangle's sets, flips the
// n-th, and leaves the rest free. Exhausted means no nonempty term remains.
inline ComplementStream complement_stream(const Rectangle& r, std::size_t depth) {
    ComplementStream out;
    std::optional<std::size_t> stop = r.all_full_beyond();
    std::vector<GeneratorSet> prefix;  // the rectangle's sets below n
    for (std::size_t n = 1;; ++n) {
        if (stop && n > *stop) {
            out.exhausted = true;
            return out;
        }
        if (out.terms.size() == depth) {
            // terms beyond the cutoff are all empty only if sets are full
            out.exhausted = false;
            return out;
        }
        const FactorSpace& factor = r.factors()->at(n);
        GeneratorSet here = r.set_at(n);
        GeneratorSet flipped = set_complement(factor, here);
        if (!set_is_empty(factor, flipped)) {
            std::vector<GeneratorSet> head(prefix);
            head.push_back(flipped);
            out.terms.emplace_back(r.factors(), std::move(head), FullTail{});
        }
        prefix.push_back(std::move(here));
        if (n > (1u << 20)) throw precondition_error("complement_stream: runaway depth");
    }
}

// ---------------------------------------------------------------------------
// Disjointness / containment

namespace detail {

inline std::size_t common_head(const Rectangle& a, const Rectangle& b) {
    return std::max(a.head_size(), b.head_size());
}

// Do the tails intersect at every coordinate beyond the common head?
inline bool tails_overlap_everywhere(const Rectangle& a, const Rectangle& b) {
    const TailSpec& ta = a.tail();
    const TailSpec& tb = b.tail();
    if (std::holds_alternative<FullTail>(ta) || std::holds_alternative<FullTail>(tb)) return true;
    if (tails_equal(ta, tb)) return true;
    const auto* ua = std::get_if<UnitTail>(&ta);
    const auto* ub = std::get_if<UnitTail>(&tb);
    if (ua && ub) {
        // constant sets: one emptiness decision covers every coordinate
        std::size_t i = common_head(a, b) + 1;
        return !set_is_disjoint(a.factors()->at(i), ua->set, ub->set);
    }
    throw precondition_error("unsupported tail combination for disjointness");
}

}  // namespace detail

inline bool is_disjoint(const Rectangle& r1, const Rectangle& r2) {
    if (!same_factors(r1.factors(), r2.factors()))
        throw precondition_error("is_disjoint: different factor sequences");
    if (r1.is_empty() || r2.is_empty()) return true;
    std::size_t h = detail::common_head(r1, r2);
    for (std::size_t i = 1; i <= h; ++i)
        if (set_is_disjoint(r1.factors()->at(i), r1.set_at(i), r2.set_at(i))) return true;
    return !detail::tails_overlap_everywhere(r1, r2);
}

inline bool is_subset(const Rectangle& r1, const Rectangle& r2) {
    if (!same_factors(r1.factors(), r2.factors()))
        throw precondition_error("is_subset: different factor sequences");
    if (r1.is_empty()) return true;
    if (r2.is_empty()) return false;
    std::size_t h = detail::common_head(r1, r2);
    for (std::size_t i = 1; i <= h; ++i)
        if (!set_is_subset(r1.factors()->at(i), r1.set_at(i), r2.set_at(i))) return false;

    const TailSpec& t1 = r1.tail();
    const TailSpec& t2 = r2.tail();
    if (std::holds_alternative<FullTail>(t2)) return true;
    if (tails_equal(t1, t2)) return true;
    const auto* u1 = std::get_if<UnitTail>(&t1);
    const auto* u2 = std::get_if<UnitTail>(&t2);
    if (u1 && u2) return set_is_subset(r1.factors()->at(h + 1), u1->set, u2->set);
    if (std::holds_alternative<FullTail>(t1)) return false;  // full sets never fit a unit tail
    throw precondition_error("unsupported tail combination for containment");
}

// ---------------------------------------------------------------------------
// Point membership. A sample point lists coordinates 1..K explicitly and is
// understood to follow the sampled rectangle's tail sets beyond K, so K must
// reach the head of whatever it is tested against.

inline bool contains_point(const Rectangle& r, const std::vector<Coord>& coords) {
    if (coords.size() < r.head_size())
        throw precondition_error("contains_point: point has fewer coordinates than the head");
    for (std::size_t i = 1; i <= coords.size(); ++i)
        if (!set_contains_point(r.factors()->at(i), r.set_at(i), coords[i - 1])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Refinement into disjoint atoms

struct RefineResult {
    std::size_t head_len = 0;
    std::vector<Rectangle> atoms;                 // pairwise disjoint
    std::vector<std::vector<bool>> membership;    // membership[a][j]: atom a inside input j
};

namespace detail {

// Disjoint cells at one coordinate from which every input set can be
// reassembled: elementary pieces between all endpoint cuts, the co-finite
// remainder when some set is unbounded, or atom groups on discrete factors.
inline std::vector<GeneratorSet> coordinate_cells(const FactorSpace& factor,
                                                  const std::vector<GeneratorSet>& sets) {
    if (factor.kind == FactorKind::Discrete) {
        std::map<std::vector<bool>, std::vector<std::string>> groups;
        for (const auto& atom : factor.atoms) {
            std::vector<bool> sig;
            bool anywhere = false;
            for (const auto& s : sets) {
                bool in = set_contains_point(factor, s, Coord::named(atom.first));
                sig.push_back(in);
                anywhere = anywhere || in;
            }
            if (anywhere) groups[sig].push_back(atom.first);
        }
        std::vector<GeneratorSet> cells;
        for (auto& [sig, names] : groups) cells.push_back(GeneratorSet::atom_set(names));
        std::sort(cells.begin(), cells.end());
        return cells;
    }

    std::vector<Rat> cuts;
    bool any_unbounded = false;
    for (const auto& s : sets) {
        if (s.is_full() || s.tag() == GeneratorSet::Tag::CoPieces) any_unbounded = true;
        for (const auto& p : s.intervals()) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
        }
    }
    if (factor.kind == FactorKind::UnitInterval && any_unbounded) {
        cuts.push_back(Rat(0));
        cuts.push_back(Rat(1));
        any_unbounded = false;  // the whole space is itself an interval
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<GeneratorSet> cells;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        GeneratorSet cell = GeneratorSet::interval(cuts[i], cuts[i + 1]);
        bool used = std::any_of(sets.begin(), sets.end(), [&](const GeneratorSet& s) {
            return set_is_subset(factor, cell, s);
        });
        if (used) cells.push_back(std::move(cell));
    }
    if (any_unbounded) {
        GeneratorSet rest = cuts.empty()
                                ? GeneratorSet::full()
                                : set_complement(factor, GeneratorSet::interval(cuts.front(), cuts.back()));
        cells.push_back(std::move(rest));
    }
    return cells;
}

}  // namespace detail

// Atoms are head-cell products over the common head length, carrying the
// common tail; each input is exactly the union of its flagged atoms. Empty
// inputs simply own no atoms.
inline RefineResult refine(const std::vector<Rectangle>& inputs,
                           std::size_t atom_limit = (1u << 20)) {
    std::vector<std::size_t> live;  // indices of non-empty inputs
    for (std::size_t j = 0; j < inputs.size(); ++j)
        if (!inputs[j].is_empty()) live.push_back(j);
    RefineResult out;
    if (live.empty()) return out;

    const FactorSeqPtr& factors = inputs[live[0]].factors();
    const TailSpec& tail = inputs[live[0]].tail();
    for (const auto& r : inputs) {
        if (!same_factors(factors, r.factors()))
            throw precondition_error("refine: different factor sequences");
        if (!r.is_empty() && !tails_equal(tail, r.tail()))
            throw precondition_error("refine: tails must agree");
    }

    std::size_t h = 0;
    for (auto j : live) h = std::max(h, inputs[j].head_size());
    out.head_len = h;

    if (h == 0) {  // every live input equals the common tail over a full head
        out.atoms.push_back(inputs[live[0]]);
        std::vector<bool> row(inputs.size(), false);
        for (auto j : live) row[j] = true;
        out.membership.push_back(std::move(row));
        return out;
    }

    std::vector<std::vector<GeneratorSet>> cells(h);
    std::vector<std::vector<std::vector<bool>>> member(h);  // [coord][cell][live input]
    std::size_t total = 1;
    for (std::size_t i = 1; i <= h; ++i) {
        std::vector<GeneratorSet> sets;
        for (auto j : live) sets.push_back(inputs[j].set_at(i));
        cells[i - 1] = detail::coordinate_cells(factors->at(i), sets);
        member[i - 1].resize(cells[i - 1].size());
        for (std::size_t k = 0; k < cells[i - 1].size(); ++k)
            for (const auto& s : sets)
                member[i - 1][k].push_back(set_is_subset(factors->at(i), cells[i - 1][k], s));
        total *= cells[i - 1].size();
        if (total > atom_limit) throw precondition_error("refine: atom count limit exceeded");
    }

    std::vector<std::size_t> idx(h, 0);
    while (true) {
        std::vector<bool> in(live.size(), true);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < live.size(); ++j)
                in[j] = in[j] && member[i][idx[i]][j];
        if (std::any_of(in.begin(), in.end(), [](bool b) { return b; })) {
            std::vector<GeneratorSet> head;
            for (std::size_t i = 0; i < h; ++i) head.push_back(cells[i][idx[i]]);
            out.atoms.emplace_back(factors, std::move(head), tail);
            std::vector<bool> row(inputs.size(), false);
            for (std::size_t j = 0; j < live.size(); ++j) row[live[j]] = in[j];
            out.membership.push_back(std::move(row));
        }
        std::size_t carry = 0;
        while (carry < h && ++idx[carry] == cells[carry].size()) {
            idx[carry] = 0;
            ++carry;
        }
        if (carry == h) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Disjoint finite unions

namespace detail {

// Pairwise disjointness with coordinate-wise grouping: partitions whose cells
// differ early stay near-linear, arbitrary overlaps fall back to pair checks.
inline std::optional<std::pair<std::size_t, std::size_t>> find_overlap(
    const std::vector<const Rectangle*>& rs, const std::vector<std::size_t>& ids,
    std::size_t coord) {
    if (ids.size() < 2) return std::nullopt;
    const FactorSeqPtr& factors = rs[ids[0]]->factors();

    std::size_t max_head = 0;
    for (auto id : ids) max_head = std::max(max_head, rs[id]->head_size());
    if (coord > max_head) {
        // identical tail region from here on: overlap unless tails miss
        for (std::size_t a = 0; a + 1 < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b)
                if (!is_disjoint(*rs[ids[a]], *rs[ids[b]]))
                    return std::make_pair(ids[a], ids[b]);
        return std::nullopt;
    }

    std::map<GeneratorSet, std::vector<std::size_t>> groups;
    for (auto id : ids) groups[rs[id]->set_at(coord)].push_back(id);

    // distinct coordinate sets must be pairwise disjoint for the grouping to
    // be sound; otherwise fall back to direct pair checks at this level
    std::vector<const GeneratorSet*> keys;
    for (const auto& [k, v] : groups) keys.push_back(&k);
    for (std::size_t a = 0; a + 1 < keys.size(); ++a)
        for (std::size_t b = a + 1; b < keys.size(); ++b)
            if (!set_is_disjoint(factors->at(coord), *keys[a], *keys[b])) {
                for (std::size_t x = 0; x + 1 < ids.size(); ++x)
                    for (std::size_t y = x + 1; y < ids.size(); ++y)
                        if (!is_disjoint(*rs[ids[x]], *rs[ids[y]]))
                            return std::make_pair(ids[x], ids[y]);
                return std::nullopt;
            }

    for (const auto& [k, group] : groups)
        if (auto w = find_overlap(rs, group, coord + 1)) return w;
    return std::nullopt;
}

}  // namespace detail

inline std::optional<std::pair<std::size_t, std::size_t>> verify_pairwise_disjoint(
    const std::vector<Rectangle>& members) {
    std::vector<const Rectangle*> all;
    for (const auto& m : members) all.push_back(&m);
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (!members[i].is_empty()) live.push_back(i);
    return detail::find_overlap(all, live, 1);
}

// Finite union of pairwise disjoint rectangles, canonically ordered.
class RectUnion {
public:
    RectUnion() = default;

    static RectUnion of(std::vector<Rectangle> members) {
        std::vector<Rectangle> live;
        for (auto& r : members)
            if (!r.is_empty()) live.push_back(std::move(r));
        for (std::size_t i = 1; i < live.size(); ++i)
            if (!same_factors(live[0].factors(), live[i].factors()))
                throw precondition_error("rect union: different factor sequences");
        if (auto w = verify_pairwise_disjoint(live))
            throw precondition_error("rect union: members " + std::to_string(w->first + 1) +
                                     " and " + std::to_string(w->second + 1) + " overlap");
        std::sort(live.begin(), live.end());
        RectUnion u;
        u.members_ = std::move(live);
        return u;
    }

    const std::vector<Rectangle>& members() const { return members_; }
    bool empty() const { return members_.empty(); }

private:
    std::vector<Rectangle> members_;
};

}  // namespace prodmeas
