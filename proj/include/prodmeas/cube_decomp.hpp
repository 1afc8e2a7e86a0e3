#pragma once

// The line-product specialization: integrable simple functions on the
// countable product of real lines concentrate on finitely many integer
// translates of the unit cube. Enumerating those translates decomposes the
// integral exactly and yields the isometric isomorphism with the direct sum
// of unit-cube Lp spaces.
//
// The decomposition grid splits head coordinates at the integers; the
// function's measure-one tail sets ride along uncut, which is what makes
// every emitted sum a finite exact identity.

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "prodmeas/errors.hpp"
#include "prodmeas/lp_space.hpp"

namespace prodmeas {

// Finitely supported integer translate index; absent coordinates are 0.
struct CubeIndex {
    std::map<std::size_t, long> offsets;  // 1-based coordinate -> nonzero integer

    static CubeIndex origin() { return {}; }
    static CubeIndex of(std::vector<long> dense) {
        CubeIndex idx;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0) idx.offsets[i + 1] = dense[i];
        return idx;
    }

    long at(std::size_t coordinate) const {
        auto it = offsets.find(coordinate);
        return it == offsets.end() ? 0 : it->second;
    }
    bool is_origin() const { return offsets.empty(); }

    friend bool operator==(const CubeIndex& a, const CubeIndex& b) {
        return a.offsets == b.offsets;
    }
    friend bool operator<(const CubeIndex& a, const CubeIndex& b) {
        return a.offsets < b.offsets;
    }

    std::string str() const {
        std::string out = "(";
        bool first = true;
        for (const auto& [i, v] : offsets) {
            if (!first) out += ", ";
            out += std::to_string(i) + ":" + std::to_string(v);
            first = false;
        }
        return out + ")";
    }
};

inline FactorSeqPtr line_factor_sequence() {
    static FactorSeqPtr seq =
        std::make_shared<FactorSequence>(FactorSequence::uniform(FactorSpace::line()));
    return seq;
}

// Functions on the line product with the given measure-one tail set; cells
// are unrestricted bounded sets.
inline AmbientPtr line_ambient(GeneratorSet tail_set) {
    return std::make_shared<AmbientSpace>(
        Rectangle(line_factor_sequence(), {}, UnitTail{std::move(tail_set)}),
        /*cells_inside=*/false);
}

// The unit cube proper: components of the direct sum live here.
inline AmbientPtr unit_cube_ambient() {
    static AmbientPtr a = std::make_shared<AmbientSpace>(
        Rectangle(line_factor_sequence(), {}, UnitTail{GeneratorSet::interval(Rat(0), Rat(1))}),
        /*cells_inside=*/true);
    return a;
}

inline Rectangle cube_rectangle(const CubeIndex& idx, std::size_t min_head = 0) {
    std::size_t h = min_head;
    for (const auto& [i, v] : idx.offsets) h = std::max(h, i);
    std::vector<GeneratorSet> head;
    for (std::size_t i = 1; i <= h; ++i)
        head.push_back(GeneratorSet::interval(Rat(idx.at(i)), Rat(idx.at(i) + 1)));
    return Rectangle(line_factor_sequence(), std::move(head),
                     UnitTail{GeneratorSet::interval(Rat(0), Rat(1))});
}

namespace detail {

inline void require_line_function(const CylinderSimpleFunction& f) {
    if (f.ambient()->factors()->tail_template().kind != FactorKind::Line ||
        f.ambient()->factors()->prefix_size() != 0)
        throw precondition_error("cube decomposition: function must live over Line factors");
    if (f.ambient()->cells_inside())
        throw precondition_error("cube decomposition: expected a free line-product function");
}

inline bool has_cube_tail(const CylinderSimpleFunction& f) {
    const auto* ut = std::get_if<UnitTail>(&f.ambient()->rect().tail());
    return ut && ut->set == GeneratorSet::interval(Rat(0), Rat(1));
}

inline void require_cube_tail(const CylinderSimpleFunction& f) {
    require_line_function(f);
    if (!has_cube_tail(f))
        throw precondition_error("cube decomposition: tail sets must be [0,1)");
}

// Integer offsets k with [k, k+1) meeting the set (bounded pieces only).
inline std::vector<long> touching_offsets(const GeneratorSet& s) {
    std::vector<long> ks;
    for (const auto& piece : s.intervals()) {
        long lo = static_cast<long>(rat_floor(piece.lo).convert_to<long>());
        for (long k = lo; Rat(k) < piece.hi; ++k)
            if (Rat(k + 1) > piece.lo) ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

}  // namespace detail

// The finite set of cube translates carrying mass of f.
inline std::vector<CubeIndex> cube_support(const CylinderSimpleFunction& f) {
    detail::require_cube_tail(f);
    std::set<CubeIndex> support;
    for (const auto& t : f.terms()) {
        std::vector<std::vector<long>> per_coord;
        for (const auto& s : t.cell) per_coord.push_back(detail::touching_offsets(s));
        std::vector<std::size_t> pick(per_coord.size(), 0);
        while (true) {
            std::vector<long> dense;
            for (std::size_t i = 0; i < per_coord.size(); ++i) dense.push_back(per_coord[i][pick[i]]);
            support.insert(CubeIndex::of(dense));
            std::size_t c = 0;
            while (c < per_coord.size() && ++pick[c] == per_coord[c].size()) {
                pick[c] = 0;
                ++c;
            }
            if (c == per_coord.size()) break;
        }
    }
    return {support.begin(), support.end()};
}

// f restricted to the head translate of idx (tail sets untouched), shifted
// back to the origin translate. The result lives on `target`.
inline CylinderSimpleFunction translate_to_unit(const CylinderSimpleFunction& f,
                                                const CubeIndex& idx,
                                                AmbientPtr target = nullptr) {
    detail::require_line_function(f);
    if (!target)
        target = detail::has_cube_tail(f) ? unit_cube_ambient() : f.ambient();
    std::vector<FunctionTerm> terms;
    const FactorSpace line = FactorSpace::line();
    for (const auto& t : f.terms()) {
        std::vector<GeneratorSet> cell;
        bool empty = false;
        for (std::size_t i = 0; i < t.cell.size(); ++i) {
            long a = idx.at(i + 1);
            GeneratorSet moved = translate_set(line, t.cell[i], Rat(-a));
            GeneratorSet clipped =
                set_intersect(line, moved, GeneratorSet::interval(Rat(0), Rat(1)));
            empty = empty || set_is_empty(line, clipped);
            cell.push_back(std::move(clipped));
        }
        if (!empty) terms.push_back(FunctionTerm{t.coeff, std::move(cell)});
    }
    return CylinderSimpleFunction(std::move(target), f.level(), std::move(terms));
}

struct CubeBreakdown {
    Rat total = Rat(0);                                // sum over the translates
    std::vector<std::pair<CubeIndex, Rat>> per_cube;   // exact share per translate
};

// Integral of |f|^p split over the integer translates its head coordinates
// touch; the measure-one tail contributes factor one to every piece. The sum
// reassembles the direct integral exactly.
inline CubeBreakdown integral_by_cubes(const CylinderSimpleFunction& f, unsigned p) {
    detail::require_line_function(f);
    if (p < 1 || p > 2)
        throw precondition_error("integral_by_cubes: exact evaluation needs p in {1,2}");

    const FactorSpace line = FactorSpace::line();
    std::map<CubeIndex, Rat> shares;
    for (const auto& t : f.terms()) {
        std::vector<std::vector<long>> per_coord;
        for (const auto& s : t.cell) per_coord.push_back(detail::touching_offsets(s));
        Rat weight = pow_rat(rat_abs(t.coeff), static_cast<long>(p));
        std::vector<std::size_t> pick(per_coord.size(), 0);
        while (true) {
            std::vector<long> dense;
            Rat piece = weight;
            for (std::size_t i = 0; i < per_coord.size(); ++i) {
                long k = per_coord[i][pick[i]];
                dense.push_back(k);
                GeneratorSet overlap = set_intersect(
                    line, t.cell[i], GeneratorSet::interval(Rat(k), Rat(k + 1)));
                piece *= measure(line, overlap).value();
            }
            if (piece != 0) shares[CubeIndex::of(dense)] += piece;
            std::size_t c = 0;
            while (c < per_coord.size() && ++pick[c] == per_coord[c].size()) {
                pick[c] = 0;
                ++c;
            }
            if (c == per_coord.size()) break;
        }
    }

    CubeBreakdown out;
    for (auto& [idx, share] : shares) {
        out.total += share;
        out.per_cube.emplace_back(idx, share);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The direct sum of unit-cube Lp spaces

class DirectSumElement {
public:
    DirectSumElement() = default;
    explicit DirectSumElement(std::map<CubeIndex, CylinderSimpleFunction> parts)
        : parts_(std::move(parts)) {
        for (auto it = parts_.begin(); it != parts_.end();) {
            if (it->second.is_zero_rep())
                it = parts_.erase(it);
            else
                ++it;
        }
    }

    const std::map<CubeIndex, CylinderSimpleFunction>& parts() const { return parts_; }
    std::vector<CubeIndex> support() const {
        std::vector<CubeIndex> out;
        for (const auto& [idx, g] : parts_) out.push_back(idx);
        return out;
    }
    bool empty() const { return parts_.empty(); }

private:
    std::map<CubeIndex, CylinderSimpleFunction> parts_;
};

// Exact p-th power of the direct-sum norm for integer p.
inline Rat oplus_norm_pow(const DirectSumElement& e, unsigned p) {
    Rat total(0);
    for (const auto& [idx, g] : e.parts()) total += integrate_abs_pow(g, p);
    return total;
}

inline RatInterval oplus_norm(const DirectSumElement& e, const Rat& p,
                              const Rat& precision = Rat(1, 1000000000)) {
    if (p < 1) throw precondition_error("oplus_norm: p must be at least 1");
    if (e.empty()) return RatInterval::point(Rat(0));
    if (p == 1) return RatInterval::point(oplus_norm_pow(e, 1));
    if (p == 2) return sqrt_bounds(oplus_norm_pow(e, 2), precision);
    RatInterval total = RatInterval::point(Rat(0));
    for (const auto& [idx, g] : e.parts()) {
        RatInterval piece = lp_norm(g, p, precision / 4);
        total = total + pow_bounds(piece, p, precision / 4);
    }
    return pow_bounds(total, Rat(1) / p, precision);
}

// The decomposition isometry: restrict to each supporting translate and
// shift it onto the unit cube.
inline DirectSumElement to_cube_components(const CylinderSimpleFunction& f) {
    detail::require_cube_tail(f);
    std::map<CubeIndex, CylinderSimpleFunction> parts;
    for (const auto& idx : cube_support(f))
        parts.emplace(idx, translate_to_unit(f, idx, unit_cube_ambient()));
    return DirectSumElement(std::move(parts));
}

// Its inverse: translate every component back over its cube and sum; the
// translated supports are pairwise disjoint, so the sum is a disjoint
// term list.
inline CylinderSimpleFunction from_cube_components(const DirectSumElement& e) {
    AmbientPtr ambient = line_ambient(GeneratorSet::interval(Rat(0), Rat(1)));
    std::size_t level = 0;
    for (const auto& [idx, g] : e.parts()) {
        level = std::max(level, g.level());
        for (const auto& [i, v] : idx.offsets) level = std::max(level, i);
    }
    const FactorSpace line = FactorSpace::line();
    std::vector<FunctionTerm> terms;
    for (const auto& [idx, g] : e.parts()) {
        CylinderSimpleFunction up = embed(g, level);
        for (const auto& t : up.terms()) {
            std::vector<GeneratorSet> cell;
            for (std::size_t i = 0; i < t.cell.size(); ++i)
                cell.push_back(translate_set(line, t.cell[i], Rat(idx.at(i + 1))));
            terms.push_back(FunctionTerm{t.coeff, std::move(cell)});
        }
    }
    return CylinderSimpleFunction(std::move(ambient), level, std::move(terms));
}

}  // namespace prodmeas
