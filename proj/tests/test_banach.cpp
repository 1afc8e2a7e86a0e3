#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodmeas/banach_space.hpp"

using namespace prodmeas;

namespace {

GeneratorSet iv(long an, long ad, long bn, long bd) {
    return GeneratorSet::interval(Rat(an, ad), Rat(bn, bd));
}

// Random coordinate function on the centered-cube tail: distinct grid combos
// of quarters inside [-1/2, 1/2) so cells are pairwise disjoint.
CoordinateFunction random_space_function(std::mt19937_64& rng, std::size_t max_level = 3) {
    std::size_t level = 1 + rng() % max_level;
    std::set<std::vector<std::size_t>> picked;
    CoordinateFunction f;
    std::size_t cells = 1 + rng() % 5;
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<std::size_t> combo;
        for (std::size_t i = 0; i < level; ++i) combo.push_back(rng() % 4);
        if (!picked.insert(combo).second) continue;
        std::vector<GeneratorSet> cell;
        for (std::size_t i = 0; i < level; ++i) {
            long a = static_cast<long>(combo[i]) - 2;  // quarters of [-1/2,1/2)
            cell.push_back(GeneratorSet::interval(Rat(a, 4), Rat(a + 1, 4)));
        }
        Rat coeff(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1);
        if (coeff == 0) coeff = Rat(1);
        f.terms.push_back(FunctionTerm{coeff, std::move(cell)});
    }
    return f;
}

CoordinateRectangle random_coordinate_rect(std::mt19937_64& rng, std::size_t max_level = 3) {
    std::size_t level = 1 + rng() % max_level;
    std::vector<GeneratorSet> head;
    for (std::size_t i = 0; i < level; ++i) {
        long a = static_cast<long>(rng() % 16) - 8;
        long w = 1 + static_cast<long>(rng() % 8);
        head.push_back(GeneratorSet::interval(Rat(a, 4), Rat(a + w, 4)));
    }
    return CoordinateRectangle(std::move(head));
}

}  // namespace

TEST_CASE("the scaled basis is summable") {
    ScaledBasisSpec basis(Rat(1, 2), "sequence space");
    CHECK(basis.scaling_sum() == Rat(1));
    CHECK_THROWS_AS(ScaledBasisSpec(Rat(3, 2), "bad"), precondition_error);
    CHECK_THROWS_AS(ScaledBasisSpec(Rat(0), "bad"), precondition_error);
}

TEST_CASE("the coordinate unit cube has measure one") {
    CoordinateRectangle q = CoordinateRectangle::unit_cube();
    Rectangle image = coordinate_image(q);
    CHECK(image.set_at(1) == iv(-1, 2, 1, 2));
    CHECK(image.set_at(7) == iv(-1, 2, 1, 2));
    CHECK(space_measure(q) == Rat(1));
}

TEST_CASE("coordinate rectangle measures") {
    CoordinateRectangle half({iv(0, 1, 1, 2)});
    CHECK(space_measure(half) == Rat(1, 2));
    CHECK(coordinate_image(half).set_at(2) == iv(-1, 2, 1, 2));

    CoordinateRectangle nothing({GeneratorSet::empty()});
    CHECK(space_measure(nothing) == Rat(0));

    CHECK_THROWS_AS(CoordinateRectangle({GeneratorSet::full()}), precondition_error);
    CHECK_THROWS_AS(CoordinateRectangle({}, GeneratorSet::interval(Rat(0), Rat(2))),
                    precondition_error);  // tail measure 2
}

TEST_CASE("translation invariance of the space measure") {
    CoordinateRectangle q = CoordinateRectangle::unit_cube();
    CHECK(space_measure(translate_coordinate_rect(q, {{1, Rat(3, 4)}, {3, Rat(-2)}})) == Rat(1));

    std::mt19937_64 rng(163);
    for (int round = 0; round < 50; ++round) {
        CoordinateRectangle b = random_coordinate_rect(rng);
        std::map<std::size_t, Rat> shift;
        for (std::size_t i = 1; i <= 4; ++i)
            if (rng() % 2 == 0) shift[i] = Rat(static_cast<long>(rng() % 33) - 16, 4);
        CHECK(space_measure(translate_coordinate_rect(b, shift)) == space_measure(b));
    }
}

TEST_CASE("the coordinate embedding is an isometry") {
    // 4 on the unit cube: both sides integrate to 4
    CoordinateFunction f;
    f.terms.push_back(FunctionTerm{Rat(4), {}});
    CylinderSimpleFunction g = embed_function(f);
    CHECK(space_norm_pow(f, 1) == Rat(4));
    CHECK(integrate_abs_pow(g, 1) == Rat(4));

    CoordinateFunction zero;
    CHECK(space_norm_pow(zero, 1) == Rat(0));
    CHECK(embed_function(zero).is_zero_rep());

    std::mt19937_64 rng(167);
    for (int round = 0; round < 50; ++round) {
        CoordinateFunction h = random_space_function(rng);
        CylinderSimpleFunction eh = embed_function(h);
        CHECK(space_norm_pow(h, 1) == integrate_abs_pow(eh, 1));
        CHECK(space_norm_pow(h, 2) == integrate_abs_pow(eh, 2));
    }
}

TEST_CASE("integration on the space splits over head translates") {
    // 4 times the indicator of the cube, presented with two explicit head
    // coordinates: the head grid cuts it into the four quarter translates
    CoordinateFunction f;
    f.terms.push_back(FunctionTerm{Rat(4), {iv(-1, 2, 1, 2), iv(-1, 2, 1, 2)}});
    SpaceIntegral si = integrate_on_space(f, 1);
    CHECK(si.direct == Rat(4));
    CHECK(si.embedded == Rat(4));
    CHECK(si.breakdown.total == Rat(4));
    CHECK(si.decomposed == Rat(4));
    CHECK(si.agree);
    REQUIRE(si.breakdown.per_cube.size() == 4);  // indices in {-1,0}^2
    for (const auto& [idx, share] : si.breakdown.per_cube) {
        CHECK(share == Rat(1));  // 4 * (1/2)^2
        for (const auto& [coord, v] : idx.offsets) CHECK(v == -1);
    }

    // canonical presentation: no head coordinates, a single piece
    CoordinateFunction plain;
    plain.terms.push_back(FunctionTerm{Rat(4), {}});
    SpaceIntegral si0 = integrate_on_space(plain, 1);
    CHECK(si0.agree);
    CHECK(si0.breakdown.per_cube.size() == 1);
    CHECK(si0.breakdown.per_cube[0].first == CubeIndex::origin());

    // a function written in shifted coordinates with the [0,1) tail goes
    // through the strict unit-cube decomposition
    CoordinateFunction shifted;
    shifted.tail_set = iv(0, 1, 1, 1);
    shifted.terms.push_back(FunctionTerm{Rat(3), {iv(0, 1, 1, 2)}});
    SpaceIntegral si1 = integrate_on_space(shifted, 1);
    CHECK(si1.agree);
    CHECK(si1.direct == Rat(3, 2));
    CHECK(si1.breakdown.per_cube.size() == 1);

    std::mt19937_64 rng(173);
    for (int round = 0; round < 40; ++round) {
        CoordinateFunction h = random_space_function(rng);
        for (unsigned p : {1u, 2u}) CHECK(integrate_on_space(h, p).agree);
    }
}
