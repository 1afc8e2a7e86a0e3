#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodmeas/cube_decomp.hpp"

using namespace prodmeas;

namespace {

AmbientPtr free_line() {
    static AmbientPtr a = line_ambient(GeneratorSet::interval(Rat(0), Rat(1)));
    return a;
}

CylinderSimpleFunction three_five() {
    return CylinderSimpleFunction(
        free_line(), 1,
        {FunctionTerm{Rat(3), {GeneratorSet::interval(Rat(0), Rat(1))}},
         FunctionTerm{Rat(5), {GeneratorSet::interval(Rat(1), Rat(2))}}});
}

CylinderSimpleFunction straddling() {
    return CylinderSimpleFunction(
        free_line(), 1, {FunctionTerm{Rat(1), {GeneratorSet::interval(Rat(1, 2), Rat(3, 2))}}});
}

// Random function over the line with cells on the grid of quarters in
// [-2, 2), distinct combos per coordinate (hence pairwise disjoint cells).
CylinderSimpleFunction random_line_function(std::mt19937_64& rng, std::size_t max_level = 3) {
    std::size_t level = 1 + rng() % max_level;
    std::set<std::vector<std::size_t>> picked;
    std::vector<FunctionTerm> terms;
    std::size_t cells = 1 + rng() % 6;
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<std::size_t> combo;
        for (std::size_t i = 0; i < level; ++i) combo.push_back(rng() % 8);
        if (!picked.insert(combo).second) continue;
        std::vector<GeneratorSet> cell;
        for (std::size_t i = 0; i < level; ++i) {
            long a = static_cast<long>(combo[i]) * 2 - 8;  // quarters in [-2, 2)
            cell.push_back(GeneratorSet::interval(Rat(a, 4), Rat(a + 2, 4)));
        }
        Rat coeff(static_cast<long>(rng() % 13) - 6, static_cast<long>(rng() % 3) + 1);
        if (coeff == 0) coeff = Rat(2);
        terms.push_back(FunctionTerm{coeff, std::move(cell)});
    }
    return CylinderSimpleFunction(free_line(), level, std::move(terms));
}

}  // namespace

TEST_CASE("cube support enumeration") {
    auto support = cube_support(three_five());
    REQUIRE(support.size() == 2);
    CHECK(support[0] == CubeIndex::origin());
    CHECK(support[1] == CubeIndex::of({1}));

    CHECK(cube_support(CylinderSimpleFunction::zero(free_line())).empty());

    // a cell split across two translates
    auto split = cube_support(straddling());
    REQUIRE(split.size() == 2);
    CHECK(split[0] == CubeIndex::origin());
    CHECK(split[1] == CubeIndex::of({1}));

    // unbounded cells are not integrable and never reach support enumeration
    CHECK_THROWS_AS(CylinderSimpleFunction(free_line(), 1,
                                           {FunctionTerm{Rat(1), {GeneratorSet::full()}}}),
                    precondition_error);
}

TEST_CASE("integral split over cubes") {
    CubeBreakdown b1 = integral_by_cubes(three_five(), 1);
    CHECK(b1.total == Rat(8));
    REQUIRE(b1.per_cube.size() == 2);
    CHECK(b1.per_cube[0].second == Rat(3));
    CHECK(b1.per_cube[1].second == Rat(5));
    CHECK(b1.total == integrate_abs_pow(three_five(), 1));

    CubeBreakdown half = integral_by_cubes(straddling(), 1);
    CHECK(half.total == Rat(1));
    REQUIRE(half.per_cube.size() == 2);
    CHECK(half.per_cube[0].second == Rat(1, 2));
    CHECK(half.per_cube[1].second == Rat(1, 2));

    CHECK(integral_by_cubes(straddling(), 2).total == Rat(1));  // coefficient 1

    std::mt19937_64 rng(139);
    for (int round = 0; round < 50; ++round) {
        auto f = random_line_function(rng);
        for (unsigned p : {1u, 2u})
            CHECK(integral_by_cubes(f, p).total == integrate_abs_pow(f, p));
    }
}

TEST_CASE("translate to the unit cube") {
    auto f = CylinderSimpleFunction(
        free_line(), 1, {FunctionTerm{Rat(5), {GeneratorSet::interval(Rat(1), Rat(2))}}});
    CylinderSimpleFunction moved = translate_to_unit(f, CubeIndex::of({1}));
    REQUIRE(moved.terms().size() == 1);
    CHECK(moved.terms()[0].coeff == Rat(5));
    CHECK(moved.terms()[0].cell[0] == GeneratorSet::interval(Rat(0), Rat(1)));
    CHECK(integrate_abs_pow(moved, 1) == Rat(5));

    // the origin index restricts to the unit cube
    CylinderSimpleFunction clipped = translate_to_unit(straddling(), CubeIndex::origin());
    CHECK(integrate_abs_pow(clipped, 1) == Rat(1, 2));

    std::mt19937_64 rng(149);
    for (int round = 0; round < 30; ++round) {
        auto g = random_line_function(rng, 2);
        // translating the piece over each supporting cube preserves its share
        CubeBreakdown b = integral_by_cubes(g, 1);
        Rat reassembled(0);
        for (const auto& [idx, share] : b.per_cube) {
            Rectangle cube = cube_rectangle(idx, g.level());
            std::vector<FunctionTerm> restricted;
            for (const auto& t : g.terms()) {
                std::vector<GeneratorSet> cell;
                bool empty = false;
                for (std::size_t i = 0; i < t.cell.size(); ++i) {
                    GeneratorSet clip =
                        set_intersect(FactorSpace::line(), t.cell[i], cube.set_at(i + 1));
                    empty = empty || clip.is_empty_rep();
                    cell.push_back(std::move(clip));
                }
                if (!empty) restricted.push_back(FunctionTerm{t.coeff, std::move(cell)});
            }
            CylinderSimpleFunction piece(free_line(), g.level(), std::move(restricted));
            reassembled += integrate_abs_pow(translate_to_unit(piece, idx), 1);
        }
        CHECK(reassembled == integrate_abs_pow(g, 1));
    }
}

TEST_CASE("direct sum decomposition and its inverse") {
    DirectSumElement e = to_cube_components(three_five());
    REQUIRE(e.parts().size() == 2);
    CHECK(oplus_norm_pow(e, 1) == Rat(8));
    CHECK(oplus_norm_pow(e, 2) == Rat(34));  // 9 + 25
    CHECK(oplus_norm(e, Rat(1)).lo == Rat(8));

    // empty element
    DirectSumElement none = to_cube_components(CylinderSimpleFunction::zero(free_line()));
    CHECK(none.empty());
    CHECK(oplus_norm(none, Rat(2)).lo == Rat(0));
    CHECK(from_cube_components(none).is_zero_rep());

    // the straddling cell reassembles exactly
    CHECK(pointwise_equal(from_cube_components(to_cube_components(straddling())), straddling()));

    std::mt19937_64 rng(151);
    for (int round = 0; round < 50; ++round) {
        auto f = random_line_function(rng);
        DirectSumElement d = to_cube_components(f);

        // isometry for p in {1,2}, exactly
        CHECK(oplus_norm_pow(d, 1) == integrate_abs_pow(f, 1));
        CHECK(oplus_norm_pow(d, 2) == integrate_abs_pow(f, 2));

        // round trips
        CHECK(pointwise_equal(from_cube_components(d), f));
        DirectSumElement again = to_cube_components(from_cube_components(d));
        REQUIRE(again.support() == d.support());
        for (const auto& [idx, g] : d.parts())
            CHECK(pointwise_equal(again.parts().at(idx), g));
    }
}

TEST_CASE("translation invariance of the norm") {
    std::mt19937_64 rng(157);
    for (int round = 0; round < 30; ++round) {
        auto f = random_line_function(rng, 2);
        std::vector<long> dense;
        for (std::size_t i = 0; i < f.level(); ++i)
            dense.push_back(static_cast<long>(rng() % 7) - 3);
        CubeIndex idx = CubeIndex::of(dense);
        // shift cells by the integer vector; lengths are preserved
        std::vector<FunctionTerm> terms;
        for (const auto& t : f.terms()) {
            std::vector<GeneratorSet> cell;
            for (std::size_t i = 0; i < t.cell.size(); ++i)
                cell.push_back(
                    translate_set(FactorSpace::line(), t.cell[i], Rat(idx.at(i + 1))));
            terms.push_back(FunctionTerm{t.coeff, std::move(cell)});
        }
        CylinderSimpleFunction moved(free_line(), f.level(), std::move(terms));
        CHECK(integrate_abs_pow(moved, 1) == integrate_abs_pow(f, 1));
        CHECK(integrate_abs_pow(moved, 2) == integrate_abs_pow(f, 2));
    }
}

TEST_CASE("distinct cubes are disjoint rectangles") {
    CHECK(is_disjoint(cube_rectangle(CubeIndex::origin()), cube_rectangle(CubeIndex::of({1}))));
    CHECK(is_disjoint(cube_rectangle(CubeIndex::of({0, 2})), cube_rectangle(CubeIndex::of({0, 3}))));
    CHECK(!is_disjoint(cube_rectangle(CubeIndex::of({1, 1})), cube_rectangle(CubeIndex::of({1, 1}))));
    CHECK(vol(cube_rectangle(CubeIndex::of({-3, 5, 7}))) == ProductValue::exact(Rat(1)));
}
