#pragma once

// One-dimensional measure spaces and the exactly-measurable sets the rest of
// the library works with: finite unions of rational half-open intervals on
// the line or the unit interval, subsets of a finite weighted atom list, the
// whole space, and (on the line only) complements of finite interval unions.
// The class is closed under intersection and complement, so unions arrive via
// De Morgan and every result stays canonical.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "prodmeas/errors.hpp"
#include "prodmeas/rational.hpp"

namespace prodmeas {

enum class FactorKind { Line, UnitInterval, Discrete };

struct FactorSpace {
    FactorKind kind = FactorKind::Line;
    std::vector<std::pair<std::string, Rat>> atoms;  // Discrete only, sorted by name

    static FactorSpace line() { return FactorSpace{FactorKind::Line, {}}; }
    static FactorSpace unit_interval() { return FactorSpace{FactorKind::UnitInterval, {}}; }
    static FactorSpace discrete(std::vector<std::pair<std::string, Rat>> a) {
        std::sort(a.begin(), a.end());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].second < 0) throw precondition_error("discrete factor: negative weight");
            if (i > 0 && a[i].first == a[i - 1].first)
                throw precondition_error("discrete factor: duplicate atom \"" + a[i].first + "\"");
        }
        return FactorSpace{FactorKind::Discrete, std::move(a)};
    }

    friend bool operator==(const FactorSpace& a, const FactorSpace& b) {
        return a.kind == b.kind && a.atoms == b.atoms;
    }
};

struct HalfOpen {
    Rat lo;
    Rat hi;  // [lo, hi), lo < hi

    friend bool operator==(const HalfOpen& a, const HalfOpen& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator<(const HalfOpen& a, const HalfOpen& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    }
};

class GeneratorSet {
public:
    enum class Tag { Full, Pieces, CoPieces, Atoms };

    GeneratorSet() : tag_(Tag::Pieces) {}  // empty set

    static GeneratorSet full() {
        GeneratorSet s;
        s.tag_ = Tag::Full;
        return s;
    }
    static GeneratorSet empty() { return GeneratorSet(); }
    static GeneratorSet pieces(std::vector<HalfOpen> iv) {
        GeneratorSet s;
        s.tag_ = Tag::Pieces;
        s.pieces_ = normalize_pieces(std::move(iv));
        return s;
    }
    static GeneratorSet interval(Rat lo, Rat hi) { return pieces({HalfOpen{std::move(lo), std::move(hi)}}); }
    static GeneratorSet co_pieces(std::vector<HalfOpen> iv) {
        GeneratorSet s;
        s.tag_ = Tag::CoPieces;
        s.pieces_ = normalize_pieces(std::move(iv));
        if (s.pieces_.empty()) s = full();
        return s;
    }
    static GeneratorSet atom_set(std::vector<std::string> names) {
        GeneratorSet s;
        s.tag_ = Tag::Atoms;
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        s.atoms_ = std::move(names);
        return s;
    }

    Tag tag() const { return tag_; }
    const std::vector<HalfOpen>& intervals() const { return pieces_; }
    const std::vector<std::string>& atom_names() const { return atoms_; }

    bool is_full() const { return tag_ == Tag::Full; }
    bool is_empty_rep() const {
        return (tag_ == Tag::Pieces && pieces_.empty()) || (tag_ == Tag::Atoms && atoms_.empty());
    }

    friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) {
        return a.tag_ == b.tag_ && a.pieces_ == b.pieces_ && a.atoms_ == b.atoms_;
    }
    friend bool operator<(const GeneratorSet& a, const GeneratorSet& b) {
        if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
        if (a.pieces_ != b.pieces_)
            return std::lexicographical_compare(a.pieces_.begin(), a.pieces_.end(), b.pieces_.begin(),
                                                b.pieces_.end());
        return a.atoms_ < b.atoms_;
    }

private:
    // Sort, drop empty intervals, reject overlap, merge touching neighbours.
    static std::vector<HalfOpen> normalize_pieces(std::vector<HalfOpen> iv) {
        for (const auto& p : iv)
            if (!(p.lo < p.hi)) throw precondition_error("interval with lo >= hi");
        std::sort(iv.begin(), iv.end());
        std::vector<HalfOpen> out;
        for (auto& p : iv) {
            if (!out.empty() && p.lo < out.back().hi)
                throw precondition_error("overlapping intervals in generator set");
            if (!out.empty() && p.lo == out.back().hi)
                out.back().hi = p.hi;
            else
                out.push_back(p);
        }
        return out;
    }

    Tag tag_;
    std::vector<HalfOpen> pieces_;
    std::vector<std::string> atoms_;
};

namespace detail {

// a \cap b for canonical sorted-disjoint interval lists.
inline std::vector<HalfOpen> pieces_intersect(const std::vector<HalfOpen>& a,
                                              const std::vector<HalfOpen>& b) {
    std::vector<HalfOpen> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        Rat lo = std::max(a[i].lo, b[j].lo);
        Rat hi = std::min(a[i].hi, b[j].hi);
        if (lo < hi) out.push_back(HalfOpen{lo, hi});
        (a[i].hi < b[j].hi ? i : j) += 1;
    }
    return out;
}

// a \ b.
inline std::vector<HalfOpen> pieces_subtract(const std::vector<HalfOpen>& a,
                                             const std::vector<HalfOpen>& b) {
    std::vector<HalfOpen> out;
    for (const auto& p : a) {
        Rat cur = p.lo;
        for (const auto& q : b) {
            if (q.hi <= cur) continue;
            if (q.lo >= p.hi) break;
            if (q.lo > cur) out.push_back(HalfOpen{cur, q.lo});
            cur = std::max(cur, q.hi);
            if (cur >= p.hi) break;
        }
        if (cur < p.hi) out.push_back(HalfOpen{cur, p.hi});
    }
    return out;
}

// a \cup b, overlap allowed.
inline std::vector<HalfOpen> pieces_union(const std::vector<HalfOpen>& a,
                                          const std::vector<HalfOpen>& b) {
    std::vector<HalfOpen> all(a);
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<HalfOpen> out;
    for (const auto& p : all) {
        if (!out.empty() && p.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, p.hi);
        else
            out.push_back(p);
    }
    return out;
}

inline std::vector<std::string> atoms_intersect(const std::vector<std::string>& a,
                                                const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

inline void validate_set(const FactorSpace& factor, const GeneratorSet& s) {
    switch (factor.kind) {
        case FactorKind::Line:
            if (s.tag() == GeneratorSet::Tag::Atoms)
                throw precondition_error("atom set on a Line factor");
            break;
        case FactorKind::UnitInterval: {
            if (s.tag() == GeneratorSet::Tag::Atoms || s.tag() == GeneratorSet::Tag::CoPieces)
                throw precondition_error("set kind not valid on a UnitInterval factor");
            for (const auto& p : s.intervals())
                if (p.lo < 0 || p.hi > 1)
                    throw precondition_error("interval outside [0,1) on a UnitInterval factor");
            break;
        }
        case FactorKind::Discrete: {
            if (s.tag() == GeneratorSet::Tag::Pieces && !s.intervals().empty())
                throw precondition_error("interval set on a Discrete factor");
            if (s.tag() == GeneratorSet::Tag::CoPieces)
                throw precondition_error("co-finite set on a Discrete factor");
            for (const auto& name : s.atom_names()) {
                bool known = std::any_of(factor.atoms.begin(), factor.atoms.end(),
                                         [&](const auto& a) { return a.first == name; });
                if (!known) throw precondition_error("unknown atom \"" + name + "\"");
            }
            break;
        }
    }
}

// Unique representation per factor: the whole space is always Tag::Full, the
// empty set always an empty piece/atom list.
inline GeneratorSet canonicalize(const FactorSpace& factor, const GeneratorSet& s) {
    validate_set(factor, s);
    switch (factor.kind) {
        case FactorKind::Line:
            return s;  // factories already normalize; [a,b) lists can never be all of R
        case FactorKind::UnitInterval:
            if (s.tag() == GeneratorSet::Tag::Pieces && s.intervals().size() == 1 &&
                s.intervals()[0].lo == 0 && s.intervals()[0].hi == 1)
                return GeneratorSet::full();
            return s;
        case FactorKind::Discrete: {
            if (s.tag() == GeneratorSet::Tag::Atoms && s.atom_names().size() == factor.atoms.size())
                return GeneratorSet::full();
            if (s.tag() == GeneratorSet::Tag::Pieces && s.intervals().empty())
                return GeneratorSet::atom_set({});
            return s;
        }
    }
    return s;
}

inline ExtRat measure(const FactorSpace& factor, const GeneratorSet& s) {
    validate_set(factor, s);
    switch (s.tag()) {
        case GeneratorSet::Tag::Full:
            switch (factor.kind) {
                case FactorKind::Line: return ExtRat::infinity();
                case FactorKind::UnitInterval: return ExtRat::finite(Rat(1));
                case FactorKind::Discrete: {
                    Rat total(0);
                    for (const auto& a : factor.atoms) total += a.second;
                    return ExtRat::finite(total);
                }
            }
            break;
        case GeneratorSet::Tag::Pieces: {
            Rat total(0);
            for (const auto& p : s.intervals()) total += p.hi - p.lo;
            return ExtRat::finite(total);
        }
        case GeneratorSet::Tag::CoPieces:
            return ExtRat::infinity();  // Line only
        case GeneratorSet::Tag::Atoms: {
            Rat total(0);
            for (const auto& name : s.atom_names()) {
                auto it = std::find_if(factor.atoms.begin(), factor.atoms.end(),
                                       [&](const auto& a) { return a.first == name; });
                total += it->second;
            }
            return ExtRat::finite(total);
        }
    }
    throw precondition_error("measure: unreachable");
}

// Complement relative to the whole factor space.
inline GeneratorSet set_complement(const FactorSpace& factor, const GeneratorSet& s) {
    validate_set(factor, s);
    switch (factor.kind) {
        case FactorKind::Line:
            switch (s.tag()) {
                case GeneratorSet::Tag::Full: return GeneratorSet::empty();
                case GeneratorSet::Tag::Pieces:
                    return s.intervals().empty() ? GeneratorSet::full()
                                                 : GeneratorSet::co_pieces(s.intervals());
                case GeneratorSet::Tag::CoPieces: return GeneratorSet::pieces(s.intervals());
                default: break;
            }
            break;
        case FactorKind::UnitInterval: {
            std::vector<HalfOpen> unit{HalfOpen{Rat(0), Rat(1)}};
            if (s.is_full()) return GeneratorSet::empty();
            return canonicalize(factor,
                                GeneratorSet::pieces(detail::pieces_subtract(unit, s.intervals())));
        }
        case FactorKind::Discrete: {
            std::vector<std::string> everyone;
            for (const auto& a : factor.atoms) everyone.push_back(a.first);
            if (s.is_full()) return GeneratorSet::atom_set({});
            std::vector<std::string> out;
            std::set_difference(everyone.begin(), everyone.end(), s.atom_names().begin(),
                                s.atom_names().end(), std::back_inserter(out));
            return canonicalize(factor, GeneratorSet::atom_set(std::move(out)));
        }
    }
    throw precondition_error("set_complement: invalid set for factor");
}

inline GeneratorSet set_intersect(const FactorSpace& factor, const GeneratorSet& a,
                                  const GeneratorSet& b) {
    validate_set(factor, a);
    validate_set(factor, b);
    if (a.is_full()) return canonicalize(factor, b);
    if (b.is_full()) return canonicalize(factor, a);

    using Tag = GeneratorSet::Tag;
    if (factor.kind == FactorKind::Discrete)
        return canonicalize(factor,
                            GeneratorSet::atom_set(detail::atoms_intersect(a.atom_names(), b.atom_names())));

    if (a.tag() == Tag::Pieces && b.tag() == Tag::Pieces)
        return canonicalize(factor,
                            GeneratorSet::pieces(detail::pieces_intersect(a.intervals(), b.intervals())));
    if (a.tag() == Tag::Pieces && b.tag() == Tag::CoPieces)
        return GeneratorSet::pieces(detail::pieces_subtract(a.intervals(), b.intervals()));
    if (a.tag() == Tag::CoPieces && b.tag() == Tag::Pieces)
        return GeneratorSet::pieces(detail::pieces_subtract(b.intervals(), a.intervals()));
    // both co-finite: complement of the union
    return GeneratorSet::co_pieces(detail::pieces_union(a.intervals(), b.intervals()));
}

inline bool set_is_empty(const FactorSpace& factor, const GeneratorSet& s) {
    if (s.is_full()) {
        return factor.kind == FactorKind::Discrete && factor.atoms.empty();
    }
    return s.is_empty_rep();
}

inline bool set_is_subset(const FactorSpace& factor, const GeneratorSet& a, const GeneratorSet& b) {
    return set_intersect(factor, a, b) == canonicalize(factor, a);
}

inline bool set_is_disjoint(const FactorSpace& factor, const GeneratorSet& a, const GeneratorSet& b) {
    return set_is_empty(factor, set_intersect(factor, a, b));
}

inline GeneratorSet set_complement_within(const FactorSpace& factor, const GeneratorSet& s,
                                          const GeneratorSet& ambient) {
    if (!set_is_subset(factor, s, ambient))
        throw precondition_error("complement_within: set is not contained in the ambient set");
    return set_intersect(factor, ambient, set_complement(factor, s));
}

inline GeneratorSet set_union_disjoint(const FactorSpace& factor, const GeneratorSet& a,
                                       const GeneratorSet& b) {
    if (!set_is_disjoint(factor, a, b))
        throw precondition_error("union_disjoint: sets overlap");
    // De Morgan keeps the result inside the representable class.
    return set_complement(factor,
                          set_intersect(factor, set_complement(factor, a), set_complement(factor, b)));
}

inline GeneratorSet translate_set(const FactorSpace& factor, const GeneratorSet& s, const Rat& shift) {
    if (factor.kind != FactorKind::Line)
        throw precondition_error("translate_set: only Line factors can be translated");
    validate_set(factor, s);
    if (s.is_full()) return s;
    std::vector<HalfOpen> moved;
    moved.reserve(s.intervals().size());
    for (const auto& p : s.intervals()) moved.push_back(HalfOpen{p.lo + shift, p.hi + shift});
    return s.tag() == GeneratorSet::Tag::CoPieces ? GeneratorSet::co_pieces(std::move(moved))
                                                  : GeneratorSet::pieces(std::move(moved));
}

// A coordinate of a sample point: a rational on Line/UnitInterval factors, an
// atom name on Discrete ones.
struct Coord {
    bool is_atom = false;
    Rat x;
    std::string atom;

    static Coord at(Rat v) { return Coord{false, std::move(v), {}}; }
    static Coord named(std::string a) { return Coord{true, Rat(0), std::move(a)}; }
};

inline bool set_contains_point(const FactorSpace& factor, const GeneratorSet& s, const Coord& c) {
    validate_set(factor, s);
    if (factor.kind == FactorKind::Discrete) {
        if (!c.is_atom) throw precondition_error("point/factor mismatch: expected an atom name");
        if (s.is_full()) return true;
        return std::binary_search(s.atom_names().begin(), s.atom_names().end(), c.atom);
    }
    if (c.is_atom) throw precondition_error("point/factor mismatch: expected a rational");
    if (s.is_full()) return factor.kind != FactorKind::UnitInterval || (c.x >= 0 && c.x < 1);
    bool in_pieces = std::any_of(s.intervals().begin(), s.intervals().end(),
                                 [&](const HalfOpen& p) { return p.lo <= c.x && c.x < p.hi; });
    return s.tag() == GeneratorSet::Tag::CoPieces ? !in_pieces : in_pieces;
}

// The factor sequence backing a product space: finitely many explicit leading
// factors, then one template repeated forever.
class FactorSequence {
public:
    FactorSequence(std::vector<FactorSpace> prefix, FactorSpace tail)
        : prefix_(std::move(prefix)), tail_(std::move(tail)) {}

    static FactorSequence uniform(FactorSpace tail) { return FactorSequence({}, std::move(tail)); }

    const FactorSpace& at(std::size_t i) const {  // 1-based
        if (i == 0) throw precondition_error("factor index is 1-based");
        return i <= prefix_.size() ? prefix_[i - 1] : tail_;
    }
    std::size_t prefix_size() const { return prefix_.size(); }
    const FactorSpace& tail_template() const { return tail_; }

    friend bool operator==(const FactorSequence& a, const FactorSequence& b) {
        return a.prefix_ == b.prefix_ && a.tail_ == b.tail_;
    }

private:
    std::vector<FactorSpace> prefix_;
    FactorSpace tail_;
};

using FactorSeqPtr = std::shared_ptr<const FactorSequence>;

inline bool same_factors(const FactorSeqPtr& a, const FactorSeqPtr& b) {
    return a == b || (a && b && *a == *b);
}

}  // namespace prodmeas
