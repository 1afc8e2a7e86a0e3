#pragma once

// Lp machinery over a product ambient: cylinder simple functions (finitely
// many constrained coordinates, an implicit indicator over the ambient tail),
// exact integration, Jessen head/tail integrals, the space of stabilizing
// level sequences and the mutually inverse isometries between it and Lp of
// the full product.
//
// Ambient coordinate measures are exact positive rationals, so every
// identity below is an exact finite computation for p in {1, 2}; other
// exponents go through certified interval powers.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "prodmeas/bounds.hpp"
#include "prodmeas/errors.hpp"
#include "prodmeas/rectangle.hpp"

namespace prodmeas {

// A rectangle with exact positive finite volume and a unit tail beyond its
// head. `cells_inside` distinguishes the proper Lp(C) setting (cells live
// inside C) from the ambient used for functions on the full line product,
// whose cells are only required to have finite measure.
class AmbientSpace {
public:
    explicit AmbientSpace(Rectangle rect, bool cells_inside = true)
        : rect_(std::move(rect)), cells_inside_(cells_inside) {
        if (!std::holds_alternative<FullTail>(rect_.tail()) &&
            !std::holds_alternative<UnitTail>(rect_.tail()))
            throw precondition_error("ambient: tail must have unit measure sets");
        ProductValue v = vol(rect_);
        if (!v.is_exact() || v.exact_value() <= 0)
            throw precondition_error("ambient: volume must be an exact positive rational");
        total_ = v.exact_value();
        for (std::size_t i = 1; i <= rect_.head_size(); ++i)
            head_measures_.push_back(measure(rect_.factors()->at(i), rect_.head()[i - 1]).value());
    }

    const Rectangle& rect() const { return rect_; }
    const FactorSeqPtr& factors() const { return rect_.factors(); }
    std::size_t unit_from() const { return rect_.head_size() + 1; }  // all 1 from here on
    bool cells_inside() const { return cells_inside_; }
    const Rat& volume() const { return total_; }

    Rat coordinate_measure(std::size_t i) const {
        if (i == 0) throw precondition_error("coordinates are 1-based");
        return i <= head_measures_.size() ? head_measures_[i - 1] : Rat(1);
    }

    // prod_{i=a}^{b} of the coordinate measures (empty product for a > b)
    Rat range_product(std::size_t a, std::size_t b) const {
        Rat acc(1);
        for (std::size_t i = std::max<std::size_t>(a, 1); i <= b && i <= head_measures_.size(); ++i)
            acc *= head_measures_[i - 1];
        return acc;
    }

    // prod_{i=n}^{infinity}: exact, only finitely many factors differ from 1
    Rat tail_product_from(std::size_t n) const { return range_product(n, head_measures_.size()); }

    friend bool operator==(const AmbientSpace& a, const AmbientSpace& b) {
        return a.rect_ == b.rect_ && a.cells_inside_ == b.cells_inside_;
    }

private:
    Rectangle rect_;
    bool cells_inside_;
    Rat total_;
    std::vector<Rat> head_measures_;
};

using AmbientPtr = std::shared_ptr<const AmbientSpace>;

inline bool same_ambient(const AmbientPtr& a, const AmbientPtr& b) {
    return a == b || (a && b && *a == *b);
}

struct FunctionTerm {
    Rat coeff;
    std::vector<GeneratorSet> cell;  // one set per coordinate 1..level
};

class CylinderSimpleFunction {
public:
    CylinderSimpleFunction(AmbientPtr ambient, std::size_t level, std::vector<FunctionTerm> terms)
        : ambient_(std::move(ambient)), level_(level), terms_(std::move(terms)) {
        if (!ambient_) throw precondition_error("function: missing ambient");
        validate();
    }

    static CylinderSimpleFunction zero(AmbientPtr ambient, std::size_t level = 0) {
        return CylinderSimpleFunction(std::move(ambient), level, {});
    }
    // c * the indicator of the whole ambient
    static CylinderSimpleFunction constant(AmbientPtr ambient, Rat c) {
        std::vector<FunctionTerm> terms;
        if (c != 0) terms.push_back(FunctionTerm{std::move(c), {}});
        return CylinderSimpleFunction(std::move(ambient), 0, std::move(terms));
    }

    const AmbientPtr& ambient() const { return ambient_; }
    std::size_t level() const { return level_; }
    const std::vector<FunctionTerm>& terms() const { return terms_; }
    bool is_zero_rep() const { return terms_.empty(); }

    Rat cell_measure(const std::vector<GeneratorSet>& cell) const {
        Rat acc(1);
        for (std::size_t i = 0; i < cell.size(); ++i)
            acc *= measure(ambient_->factors()->at(i + 1), cell[i]).value();
        return acc;
    }

private:
    void validate() {
        std::vector<FunctionTerm> kept;
        for (auto& t : terms_) {
            if (t.cell.size() != level_)
                throw precondition_error("function term arity differs from the level");
            bool empty_cell = false;
            for (std::size_t i = 0; i < t.cell.size(); ++i) {
                const FactorSpace& factor = ambient_->factors()->at(i + 1);
                t.cell[i] = canonicalize(factor, t.cell[i]);
                if (ambient_->cells_inside() &&
                    !set_is_subset(factor, t.cell[i], ambient_->rect().set_at(i + 1)))
                    throw precondition_error("function cell leaves the ambient rectangle");
                if (measure(factor, t.cell[i]).is_infinite())
                    throw precondition_error("function cell has infinite measure");
                empty_cell = empty_cell || set_is_empty(factor, t.cell[i]);
            }
            if (t.coeff != 0 && !empty_cell) kept.push_back(std::move(t));
        }
        terms_ = std::move(kept);
        std::sort(terms_.begin(), terms_.end(), [](const FunctionTerm& a, const FunctionTerm& b) {
            return std::lexicographical_compare(a.cell.begin(), a.cell.end(), b.cell.begin(),
                                                b.cell.end());
        });
        for (std::size_t a = 0; a + 1 < terms_.size(); ++a)
            for (std::size_t b = a + 1; b < terms_.size(); ++b) {
                bool disjoint = false;
                for (std::size_t i = 0; i < level_ && !disjoint; ++i)
                    disjoint = set_is_disjoint(ambient_->factors()->at(i + 1), terms_[a].cell[i],
                                               terms_[b].cell[i]);
                if (!disjoint) throw precondition_error("function cells overlap");
            }
    }

    AmbientPtr ambient_;
    std::size_t level_;
    std::vector<FunctionTerm> terms_;
};

// ---------------------------------------------------------------------------
// Construction helpers

// Sum a list of possibly-overlapping weighted cells into a proper simple
// function: refine per coordinate, accumulate coefficients per grid cell.
inline CylinderSimpleFunction flatten_terms(const AmbientPtr& ambient, std::size_t level,
                                            const std::vector<FunctionTerm>& raw,
                                            std::size_t cell_limit = (1u << 20)) {
    if (raw.empty()) return CylinderSimpleFunction::zero(ambient, level);
    if (level == 0) {
        Rat total(0);
        for (const auto& t : raw) total += t.coeff;
        return CylinderSimpleFunction::constant(ambient, total);
    }

    std::vector<std::vector<GeneratorSet>> cells(level);
    std::vector<std::vector<std::vector<std::size_t>>> owned(level);  // [coord][term] -> cell ids
    for (std::size_t i = 0; i < level; ++i) {
        const FactorSpace& factor = ambient->factors()->at(i + 1);
        std::vector<GeneratorSet> sets;
        for (const auto& t : raw) sets.push_back(t.cell[i]);
        cells[i] = detail::coordinate_cells(factor, sets);
        owned[i].resize(raw.size());
        for (std::size_t k = 0; k < cells[i].size(); ++k)
            for (std::size_t t = 0; t < raw.size(); ++t)
                if (set_is_subset(factor, cells[i][k], raw[t].cell[i])) owned[i][t].push_back(k);
    }

    std::map<std::vector<std::size_t>, Rat> acc;
    for (std::size_t t = 0; t < raw.size(); ++t) {
        std::size_t combos = 1;
        for (std::size_t i = 0; i < level; ++i) combos *= std::max<std::size_t>(owned[i][t].size(), 1);
        if (combos > cell_limit) throw precondition_error("flatten: cell refinement too large");
        if (std::any_of(owned.begin(), owned.end(),
                        [&](const auto& per_coord) { return per_coord[t].empty(); }))
            continue;  // empty cell somewhere
        std::vector<std::size_t> pick(level, 0);
        while (true) {
            std::vector<std::size_t> key(level);
            for (std::size_t i = 0; i < level; ++i) key[i] = owned[i][t][pick[i]];
            acc[key] += raw[t].coeff;
            std::size_t c = 0;
            while (c < level && ++pick[c] == owned[c][t].size()) {
                pick[c] = 0;
                ++c;
            }
            if (c == level) break;
        }
    }

    std::vector<FunctionTerm> terms;
    for (const auto& [key, coeff] : acc) {
        if (coeff == 0) continue;
        std::vector<GeneratorSet> cell;
        for (std::size_t i = 0; i < level; ++i) cell.push_back(cells[i][key[i]]);
        terms.push_back(FunctionTerm{coeff, std::move(cell)});
    }
    return CylinderSimpleFunction(ambient, level, std::move(terms));
}

// ---------------------------------------------------------------------------
// Linear structure

inline CylinderSimpleFunction scale(const CylinderSimpleFunction& f, const Rat& c) {
    std::vector<FunctionTerm> terms;
    if (c != 0)
        for (const auto& t : f.terms()) terms.push_back(FunctionTerm{c * t.coeff, t.cell});
    return CylinderSimpleFunction(f.ambient(), f.level(), std::move(terms));
}

// The linear level embedding: same values, cells extended by the ambient
// sets of the new coordinates.
inline CylinderSimpleFunction embed(const CylinderSimpleFunction& f, std::size_t m) {
    if (m < f.level()) throw precondition_error("embed: target level below the function level");
    if (m == f.level()) return f;
    std::vector<FunctionTerm> terms;
    for (const auto& t : f.terms()) {
        FunctionTerm nt{t.coeff, t.cell};
        for (std::size_t i = f.level() + 1; i <= m; ++i)
            nt.cell.push_back(f.ambient()->rect().set_at(i));
        terms.push_back(std::move(nt));
    }
    return CylinderSimpleFunction(f.ambient(), m, std::move(terms));
}

inline CylinderSimpleFunction add(const CylinderSimpleFunction& f, const CylinderSimpleFunction& g) {
    if (!same_ambient(f.ambient(), g.ambient()))
        throw precondition_error("add: different ambients");
    std::size_t level = std::max(f.level(), g.level());
    CylinderSimpleFunction fe = embed(f, level), ge = embed(g, level);
    std::vector<FunctionTerm> all = fe.terms();
    all.insert(all.end(), ge.terms().begin(), ge.terms().end());
    return flatten_terms(f.ambient(), level, all);
}

inline CylinderSimpleFunction sub(const CylinderSimpleFunction& f, const CylinderSimpleFunction& g) {
    return add(f, scale(g, Rat(-1)));
}

// Pointwise equality, decided exactly by flattening the difference.
inline bool pointwise_equal(const CylinderSimpleFunction& f, const CylinderSimpleFunction& g) {
    return sub(f, g).is_zero_rep();
}

// ---------------------------------------------------------------------------
// Integration and norms

// Exact integral over the whole ambient product (the implicit tail indicator
// contributes the exact tail measure product).
inline Rat integrate(const CylinderSimpleFunction& f) {
    Rat total(0);
    for (const auto& t : f.terms()) total += t.coeff * f.cell_measure(t.cell);
    return total * f.ambient()->tail_product_from(f.level() + 1);
}

// Exact integral of |f|^p for integer p >= 1.
inline Rat integrate_abs_pow(const CylinderSimpleFunction& f, unsigned p) {
    if (p == 0) throw precondition_error("integrate_abs_pow: p must be at least 1");
    Rat total(0);
    for (const auto& t : f.terms())
        total += pow_rat(rat_abs(t.coeff), static_cast<long>(p)) * f.cell_measure(t.cell);
    return total * f.ambient()->tail_product_from(f.level() + 1);
}

// Lp norm: exact for p = 1, exact square with certified root for p = 2,
// certified interval exponentiation for other rational p >= 1.
inline RatInterval lp_norm(const CylinderSimpleFunction& f, const Rat& p,
                           const Rat& precision = Rat(1, 1000000000)) {
    if (p < 1) throw precondition_error("lp_norm: p must be at least 1");
    if (f.is_zero_rep()) return RatInterval::point(Rat(0));
    if (p == 1) return RatInterval::point(integrate_abs_pow(f, 1));
    if (p == 2) return sqrt_bounds(integrate_abs_pow(f, 2), precision);
    if (rat_den(p) == 1 && rat_num(p) <= 64) {
        Rat ip = integrate_abs_pow(f, static_cast<unsigned>(rat_num(p).convert_to<long>()));
        return pow_bounds(ip, Rat(1) / p, precision);
    }
    RatInterval total = RatInterval::point(Rat(0));
    const Rat tail = f.ambient()->tail_product_from(f.level() + 1);
    for (const auto& t : f.terms()) {
        RatInterval cp = pow_bounds(rat_abs(t.coeff), p, precision / 4);
        total = total + f.cell_measure(t.cell) * cp;
    }
    total = tail * total;
    return pow_bounds(total, Rat(1) / p, precision);
}

// ---------------------------------------------------------------------------
// Jessen operators

// Integrate out coordinates n, n+1, ...: a function of the first n-1
// coordinates. Past the stabilization point this is the identity.
inline CylinderSimpleFunction tail_integral(const CylinderSimpleFunction& f, std::size_t n) {
    if (n == 0) throw precondition_error("tail_integral: n is 1-based");
    const AmbientPtr& ambient = f.ambient();
    std::size_t level = f.level();
    if (n > level) {
        // nothing of f depends on the integrated coordinates; only the tail
        // indicator contributes, and it integrates to the exact tail product
        Rat factor = ambient->tail_product_from(n);
        return scale(embed(f, n - 1), factor);
    }
    Rat tail = ambient->tail_product_from(level + 1);
    std::vector<FunctionTerm> raw;
    for (const auto& t : f.terms()) {
        Rat weight = t.coeff * tail;
        for (std::size_t i = n; i <= level; ++i)
            weight *= measure(ambient->factors()->at(i), t.cell[i - 1]).value();
        raw.push_back(FunctionTerm{weight, {t.cell.begin(), t.cell.begin() + (n - 1)}});
    }
    return flatten_terms(ambient, n - 1, raw);
}

// Integrate out coordinates 1..n: constant in the head, the original cell
// constraints surviving on coordinates past n.
inline CylinderSimpleFunction head_integral(const CylinderSimpleFunction& f, std::size_t n) {
    const AmbientPtr& ambient = f.ambient();
    std::size_t level = f.level();
    std::size_t out_level = std::max(n, level);
    std::vector<FunctionTerm> raw;
    for (const auto& t : f.terms()) {
        Rat weight = t.coeff;
        for (std::size_t i = 1; i <= std::min(n, level); ++i)
            weight *= measure(ambient->factors()->at(i), t.cell[i - 1]).value();
        for (std::size_t i = level + 1; i <= n; ++i) weight *= ambient->coordinate_measure(i);
        std::vector<GeneratorSet> cell;
        for (std::size_t i = 1; i <= out_level; ++i)
            cell.push_back(i <= n ? ambient->rect().set_at(i) : t.cell[i - 1]);
        raw.push_back(FunctionTerm{weight, std::move(cell)});
    }
    return flatten_terms(ambient, out_level, raw);
}

// ---------------------------------------------------------------------------
// Stabilizing level sequences

// Represents the sequence whose n-th component, for n >= start, is
// rep / prod_{i=start+1}^{n} of the ambient coordinate measures.
struct LevelSequence {
    std::size_t start;
    CylinderSimpleFunction rep;
};

inline CylinderSimpleFunction sequence_component(const LevelSequence& s, std::size_t n) {
    if (n >= s.start) {
        Rat divisor = s.rep.ambient()->range_product(s.start + 1, n);
        return scale(embed(s.rep, n), Rat(1) / divisor);
    }
    // canonical early components: tail integrals of the represented function
    Rat t = s.rep.ambient()->tail_product_from(s.start + 1);
    return tail_integral(scale(s.rep, Rat(1) / t), n + 1);
}

// The forward isometry: f maps to its sequence of tail integrals.
inline LevelSequence to_level_sequence(const CylinderSimpleFunction& f) {
    Rat t = f.ambient()->tail_product_from(f.level() + 1);
    return LevelSequence{f.level(), scale(f, t)};
}

// The inverse isometry: divide out the exact tail measure product.
inline CylinderSimpleFunction from_level_sequence(const LevelSequence& s) {
    Rat t = s.rep.ambient()->tail_product_from(s.start + 1);
    if (t == 0) throw precondition_error("level sequence: zero tail product");
    return scale(s.rep, Rat(1) / t);
}

inline LevelSequence sequence_sub(const LevelSequence& a, const LevelSequence& b) {
    std::size_t level = std::max(a.start, b.start);
    return LevelSequence{level, sub(sequence_component(a, level), sequence_component(b, level))};
}

inline bool sequence_equal(const LevelSequence& a, const LevelSequence& b) {
    return sequence_sub(a, b).rep.is_zero_rep();
}

// The limit norm lim_n of the component norms, attained at finite n for
// stabilizing representatives: |rep|_p^p over the first `start` coordinates
// times the tail product to the power 1-p.
inline Rat sequence_norm_pow(const LevelSequence& s, unsigned p) {
    const AmbientPtr& ambient = s.rep.ambient();
    Rat head_part(0);
    for (const auto& t : s.rep.terms())
        head_part += pow_rat(rat_abs(t.coeff), static_cast<long>(p)) * s.rep.cell_measure(t.cell);
    Rat tail = ambient->tail_product_from(s.start + 1);
    return head_part * pow_rat(tail, 1 - static_cast<long>(p));
}

inline RatInterval sequence_norm(const LevelSequence& s, const Rat& p,
                                 const Rat& precision = Rat(1, 1000000000)) {
    if (p < 1) throw precondition_error("sequence_norm: p must be at least 1");
    if (s.rep.is_zero_rep()) return RatInterval::point(Rat(0));
    if (p == 1) return RatInterval::point(sequence_norm_pow(s, 1));
    if (p == 2) return sqrt_bounds(sequence_norm_pow(s, 2), precision);
    // general p: norm of the stabilized component at the unit-measure point
    std::size_t n = std::max(s.start, s.rep.ambient()->unit_from() - 1);
    return lp_norm(sequence_component(s, n), p, precision);
}

// The truncation approximants: zero below m, the m-th component divided
// onward from m. Distance to the original is computable exactly and is 0
// once m reaches the stabilization index.
inline LevelSequence sequence_truncate(const LevelSequence& s, std::size_t m) {
    return LevelSequence{m, sequence_component(s, m)};
}

}  // namespace prodmeas
