#pragma once

// Measures on a separable Banach space carrying a scaled coordinate basis:
// reading coordinates embeds the space into the line product, the pushforward
// of the product measure gives a translation invariant measure normalizing
// the coordinate unit cube to 1, and composing with the cube decomposition
// expresses every integral as an exact finite sum.
//
// Only the concrete scaled-basis instance is built: the scaling is summable,
// so bounded coordinate rectangles map exactly onto product rectangles.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prodmeas/cube_decomp.hpp"
#include "prodmeas/errors.hpp"
#include "prodmeas/lp_space.hpp"
#include "prodmeas/product_measure.hpp"

namespace prodmeas {

// Basis vectors r^n e_n with coordinate functionals r^-n e_n*: the scaling
// sum r/(1-r) is finite, which is what lets bounded coordinate sequences
// represent elements of the space.
struct ScaledBasisSpec {
    Rat ratio;
    std::string space_label;

    ScaledBasisSpec(Rat r, std::string label) : ratio(std::move(r)), space_label(std::move(label)) {
        if (!(ratio > 0) || !(ratio < 1))
            throw precondition_error("scaled basis: ratio must lie in (0,1)");
    }
    Rat scaling_sum() const { return ratio / (1 - ratio); }
};

inline GeneratorSet centered_cube_side() {
    return GeneratorSet::interval(Rat(-1, 2), Rat(1, 2));
}

// A coordinate-defined subset of the space: finitely many bounded head
// constraints on the coordinate readings, then a fixed measure-one tail
// constraint (the centered cube side by default).
class CoordinateRectangle {
public:
    CoordinateRectangle(std::vector<GeneratorSet> head, GeneratorSet tail_set = centered_cube_side())
        : head_(std::move(head)), tail_set_(std::move(tail_set)) {
        const FactorSpace line = FactorSpace::line();
        for (const auto& s : head_) {
            validate_set(line, s);
            if (measure(line, s).is_infinite())
                throw precondition_error("coordinate rectangle: unbounded head constraint");
        }
        if (!(measure(line, tail_set_) == Rat(1)))
            throw precondition_error("coordinate rectangle: tail constraint must have measure 1");
        if (tail_set_.intervals().empty())
            throw precondition_error("coordinate rectangle: tail constraint must be bounded");
    }

    static CoordinateRectangle unit_cube() { return CoordinateRectangle({}); }

    const std::vector<GeneratorSet>& head() const { return head_; }
    const GeneratorSet& tail_set() const { return tail_set_; }

private:
    std::vector<GeneratorSet> head_;
    GeneratorSet tail_set_;
};

// Image of the coordinate rectangle under the coordinate reading map: the
// product rectangle with the same per-coordinate sets. Exact because the
// bounded tail keeps the image inside the representable class.
inline Rectangle coordinate_image(const CoordinateRectangle& b) {
    return Rectangle(line_factor_sequence(), b.head(), UnitTail{b.tail_set()});
}

// The pushforward measure of a coordinate rectangle: volume of its image.
inline Rat space_measure(const CoordinateRectangle& b) {
    ProductValue v = vol(coordinate_image(b));
    if (!v.is_exact())
        throw inconclusive_error("space_measure: image volume is not exact");
    return v.exact_value();
}

// Simple functions on the space, written in coordinates: weighted
// pairwise-disjoint coordinate rectangles sharing one tail constraint.
struct CoordinateFunction {
    GeneratorSet tail_set = centered_cube_side();
    std::vector<FunctionTerm> terms;
};

// The induced function on the line product (the coordinate reading of f).
// Norms on both sides agree exactly; the measure-space side is evaluated
// through rectangle volumes, independently of the Lp machinery.
inline CylinderSimpleFunction embed_function(const CoordinateFunction& f) {
    std::size_t level = 0;
    for (const auto& t : f.terms) level = std::max(level, t.cell.size());
    std::vector<FunctionTerm> terms;
    for (const auto& t : f.terms) {
        FunctionTerm nt{t.coeff, t.cell};
        while (nt.cell.size() < level) nt.cell.push_back(f.tail_set);
        terms.push_back(std::move(nt));
    }
    return CylinderSimpleFunction(line_ambient(f.tail_set), level, std::move(terms));
}

// |f|^p integrated against the pushforward measure, cell by cell.
inline Rat space_norm_pow(const CoordinateFunction& f, unsigned p) {
    Rat total(0);
    for (const auto& t : f.terms) {
        CoordinateRectangle cell(t.cell, f.tail_set);
        total += pow_rat(rat_abs(t.coeff), static_cast<long>(p)) * space_measure(cell);
    }
    return total;
}

struct SpaceIntegral {
    Rat direct;                 // integral of |f|^p on the space
    Rat embedded;               // same through the coordinate embedding
    CubeBreakdown breakdown;    // split over integer head translates
    Rat decomposed;             // reassembled from the shifted components
    bool agree = false;
};

// Evaluates the integral three ways: directly on the space, through the
// embedding, and as the exact sum over the cube translates of the embedded
// function (each piece shifted back and re-integrated).
inline SpaceIntegral integrate_on_space(const CoordinateFunction& f, unsigned p) {
    if (p < 1 || p > 2)
        throw precondition_error("integrate_on_space: exact evaluation needs p in {1,2}");
    SpaceIntegral out{Rat(0), Rat(0), {}, Rat(0), false};
    out.direct = space_norm_pow(f, p);

    CylinderSimpleFunction g = embed_function(f);
    out.embedded = integrate_abs_pow(g, p);
    out.breakdown = integral_by_cubes(g, p);

    if (detail::has_cube_tail(g)) {
        // aligned tails: the strict unit-cube decomposition applies verbatim
        out.decomposed = oplus_norm_pow(to_cube_components(g), p);
    } else {
        for (const auto& [idx, share] : out.breakdown.per_cube) {
            Rectangle cube = cube_rectangle(idx, g.level());
            std::vector<FunctionTerm> restricted;
            const FactorSpace line = FactorSpace::line();
            for (const auto& t : g.terms()) {
                std::vector<GeneratorSet> cell;
                bool empty = false;
                for (std::size_t i = 0; i < t.cell.size(); ++i) {
                    GeneratorSet clipped = set_intersect(line, t.cell[i], cube.set_at(i + 1));
                    empty = empty || set_is_empty(line, clipped);
                    cell.push_back(std::move(clipped));
                }
                if (!empty) restricted.push_back(FunctionTerm{t.coeff, std::move(cell)});
            }
            CylinderSimpleFunction piece(g.ambient(), g.level(), std::move(restricted));
            CylinderSimpleFunction shifted = translate_to_unit(piece, idx, g.ambient());
            out.decomposed += integrate_abs_pow(shifted, p);
        }
    }
    out.agree = out.direct == out.embedded && out.embedded == out.breakdown.total &&
                out.breakdown.total == out.decomposed;
    return out;
}

// Translation of a coordinate rectangle by an element with finitely many
// nonzero rational coordinates; the pushforward measure is invariant.
inline CoordinateRectangle translate_coordinate_rect(const CoordinateRectangle& b,
                                                     const std::map<std::size_t, Rat>& shift) {
    Rectangle moved = translate_rect(coordinate_image(b), shift);
    std::size_t h = moved.head_size();
    std::vector<GeneratorSet> head;
    GeneratorSet tail = b.tail_set();
    // coordinates whose shifted set no longer matches the tail stay explicit
    for (std::size_t i = 1; i <= h; ++i) head.push_back(moved.set_at(i));
    return CoordinateRectangle(std::move(head), std::move(tail));
}

}  // namespace prodmeas
