#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodmeas/lp_space.hpp"

using namespace prodmeas;

namespace {

FactorSeqPtr unit_factors() {
    static FactorSeqPtr seq =
        std::make_shared<FactorSequence>(FactorSequence::uniform(FactorSpace::unit_interval()));
    return seq;
}

// The full unit product: every coordinate measure is 1.
AmbientPtr cube_ambient() {
    static AmbientPtr a =
        std::make_shared<AmbientSpace>(Rectangle::full_space(unit_factors()));
    return a;
}

// Shrunk ambient [0,3/4) x [0,1/2) x [0,1) x ...: volume 3/8, two coordinates
// with measure below 1.
AmbientPtr shrunk_ambient() {
    static AmbientPtr a = std::make_shared<AmbientSpace>(
        Rectangle(unit_factors(),
                  {GeneratorSet::interval(Rat(0), Rat(3, 4)),
                   GeneratorSet::interval(Rat(0), Rat(1, 2))},
                  FullTail{}));
    return a;
}

GeneratorSet iv(long an, long ad, long bn, long bd) {
    return GeneratorSet::interval(Rat(an, ad), Rat(bn, bd));
}

CylinderSimpleFunction two_on_half(AmbientPtr ambient) {
    return CylinderSimpleFunction(ambient, 1, {FunctionTerm{Rat(2), {iv(0, 1, 1, 2)}}});
}

// Random cylinder simple function: cells drawn as distinct combinations of a
// per-coordinate partition of the ambient set into four equal grid pieces,
// so distinct cells are automatically disjoint.
CylinderSimpleFunction random_function(std::mt19937_64& rng, const AmbientPtr& ambient,
                                       std::size_t max_level = 4, std::size_t max_cells = 8) {
    std::size_t level = 1 + rng() % max_level;
    std::vector<std::vector<GeneratorSet>> grid(level);
    for (std::size_t i = 0; i < level; ++i) {
        GeneratorSet amb = ambient->rect().set_at(i + 1);
        Rat hi = amb.is_full() ? Rat(1) : amb.intervals()[0].hi;
        for (int k = 0; k < 4; ++k)
            grid[i].push_back(GeneratorSet::interval(hi * Rat(k, 4), hi * Rat(k + 1, 4)));
    }
    std::set<std::vector<std::size_t>> picked;
    std::vector<FunctionTerm> terms;
    std::size_t cells = 1 + rng() % max_cells;
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<std::size_t> combo;
        for (std::size_t i = 0; i < level; ++i) combo.push_back(rng() % 4);
        if (!picked.insert(combo).second) continue;
        std::vector<GeneratorSet> cell;
        for (std::size_t i = 0; i < level; ++i) cell.push_back(grid[i][combo[i]]);
        Rat coeff(static_cast<long>(rng() % 17) - 8, static_cast<long>(rng() % 4) + 1);
        if (coeff == 0) coeff = Rat(1);
        terms.push_back(FunctionTerm{coeff, std::move(cell)});
    }
    return CylinderSimpleFunction(ambient, level, std::move(terms));
}

// Head-only p-norm power over the first `level` coordinates (what the
// finite-product space norm sees).
Rat head_norm_pow(const CylinderSimpleFunction& f, unsigned p) {
    Rat acc(0);
    for (const auto& t : f.terms())
        acc += pow_rat(rat_abs(t.coeff), static_cast<long>(p)) * f.cell_measure(t.cell);
    return acc;
}

}  // namespace

TEST_CASE("ambient validation") {
    CHECK_THROWS_AS(AmbientSpace(Rectangle::full_space(std::make_shared<FactorSequence>(
                        FactorSequence::uniform(FactorSpace::line())))),
                    precondition_error);  // infinite volume
    CHECK_THROWS_AS(AmbientSpace(Rectangle::empty_set(unit_factors())), precondition_error);
    CHECK(shrunk_ambient()->volume() == Rat(3, 8));
    CHECK(shrunk_ambient()->tail_product_from(2) == Rat(1, 2));
    CHECK(shrunk_ambient()->tail_product_from(3) == Rat(1));
    CHECK(shrunk_ambient()->range_product(1, 2) == Rat(3, 8));
}

TEST_CASE("function validation") {
    CHECK_THROWS_AS(CylinderSimpleFunction(
                        cube_ambient(), 1,
                        {FunctionTerm{Rat(1), {iv(0, 1, 1, 2)}},
                         FunctionTerm{Rat(2), {iv(1, 4, 3, 4)}}}),
                    precondition_error);  // overlapping cells
    CHECK_THROWS_AS(CylinderSimpleFunction(shrunk_ambient(), 1,
                                           {FunctionTerm{Rat(1), {iv(0, 1, 1, 1)}}}),
                    precondition_error);  // cell outside the ambient
    // zero coefficients and empty cells are dropped
    CylinderSimpleFunction f(cube_ambient(), 1,
                             {FunctionTerm{Rat(0), {iv(0, 1, 1, 2)}}});
    CHECK(f.is_zero_rep());
}

TEST_CASE("integration") {
    CHECK(integrate(two_on_half(cube_ambient())) == Rat(1));
    CHECK(integrate(CylinderSimpleFunction::constant(shrunk_ambient(), Rat(1))) == Rat(3, 8));
    CHECK(integrate(CylinderSimpleFunction::zero(cube_ambient())) == Rat(0));

    // linearity, exactly
    std::mt19937_64 rng(101);
    for (int round = 0; round < 30; ++round) {
        AmbientPtr ambient = round % 2 ? cube_ambient() : shrunk_ambient();
        auto f = random_function(rng, ambient), g = random_function(rng, ambient);
        Rat a(static_cast<long>(rng() % 7) - 3), b(static_cast<long>(rng() % 5) + 1);
        CHECK(integrate(add(scale(f, a), scale(g, b))) == a * integrate(f) + b * integrate(g));
    }
}

TEST_CASE("norms") {
    auto f = two_on_half(cube_ambient());
    CHECK(lp_norm(f, Rat(1)).is_point());
    CHECK(lp_norm(f, Rat(1)).lo == Rat(1));
    CHECK(integrate_abs_pow(f, 2) == Rat(2));  // squared two-norm, exact
    RatInterval n2 = lp_norm(f, Rat(2));
    CHECK(n2.lo * n2.lo <= 2);
    CHECK(n2.hi * n2.hi >= 2);
    CHECK(n2.width() <= Rat(1, 1000000000));
    CHECK_THROWS_AS(lp_norm(f, Rat(1, 2)), precondition_error);

    // general p: |2|^3 * 1/2 = 4, cube root of 4
    RatInterval n3 = lp_norm(f, Rat(3));
    CHECK(pow_rat(n3.lo, 3) <= 4);
    CHECK(pow_rat(n3.hi, 3) >= 4);

    // triangle inequality: exact for p=1, via enclosures for p=2
    std::mt19937_64 rng(103);
    for (int round = 0; round < 30; ++round) {
        auto a = random_function(rng, cube_ambient()), b = random_function(rng, cube_ambient());
        CHECK(integrate_abs_pow(add(a, b), 1) <= integrate_abs_pow(a, 1) + integrate_abs_pow(b, 1));
        CHECK(lp_norm(add(a, b), Rat(2)).lo <= lp_norm(a, Rat(2)).hi + lp_norm(b, Rat(2)).hi);
    }
}

TEST_CASE("level embedding") {
    auto f = two_on_half(shrunk_ambient());
    CHECK(pointwise_equal(embed(f, 1), f));
    CHECK_THROWS_AS(embed(f, 0), precondition_error);

    std::mt19937_64 rng(107);
    for (int round = 0; round < 30; ++round) {
        AmbientPtr ambient = round % 2 ? cube_ambient() : shrunk_ambient();
        auto g = random_function(rng, ambient, 3);
        std::size_t n = g.level();
        std::size_t m = n + rng() % 3;
        std::size_t k = m + rng() % 3;
        // finite-level norm scaling under the embedding
        for (unsigned p : {1u, 2u})
            CHECK(head_norm_pow(embed(g, m), p) ==
                  head_norm_pow(g, p) * ambient->range_product(n + 1, m));
        // composing embeddings is the single embedding
        CHECK(pointwise_equal(embed(embed(g, m), k), embed(g, k)));
        // as elements of Lp of the product, embedding changes nothing
        CHECK(integrate(embed(g, m)) == integrate(g));
    }
}

TEST_CASE("tail integral") {
    auto f = two_on_half(cube_ambient());
    // integrating beyond the level leaves the function untouched (unit tail)
    CHECK(pointwise_equal(tail_integral(f, 2), f));
    // integrating everything yields the constant integral
    CylinderSimpleFunction all = tail_integral(f, 1);
    CHECK(all.level() == 0);
    CHECK(pointwise_equal(all, CylinderSimpleFunction::constant(cube_ambient(), Rat(1))));

    // on a shrunk ambient the tail product appears explicitly
    auto g = two_on_half(shrunk_ambient());
    CylinderSimpleFunction t2 = tail_integral(g, 2);
    CHECK(pointwise_equal(t2, scale(g, Rat(1, 2))));  // integrates out coordinate 2, measure 1/2

    std::mt19937_64 rng(109);
    for (int round = 0; round < 30; ++round) {
        AmbientPtr ambient = round % 2 ? cube_ambient() : shrunk_ambient();
        auto h = random_function(rng, ambient);
        std::size_t stab = std::max<std::size_t>(h.level(), ambient->unit_from() - 1) + 2;
        CHECK(pointwise_equal(tail_integral(h, stab), h));
        CHECK(pointwise_equal(tail_integral(h, stab + 3), h));
        // Fubini: integrating the tail integral recounts the tail measures
        for (std::size_t n = 1; n <= h.level() + 1; ++n)
            CHECK(integrate(tail_integral(h, n)) ==
                  integrate(h) * ambient->tail_product_from(n));
    }
}

TEST_CASE("head integral") {
    auto f = two_on_half(cube_ambient());
    CylinderSimpleFunction h1 = head_integral(f, 1);
    CHECK(pointwise_equal(h1, CylinderSimpleFunction::constant(cube_ambient(), Rat(1))));

    std::mt19937_64 rng(113);
    for (int round = 0; round < 30; ++round) {
        AmbientPtr ambient = round % 2 ? cube_ambient() : shrunk_ambient();
        auto g = random_function(rng, ambient);
        std::size_t stab = std::max<std::size_t>(g.level(), ambient->unit_from() - 1);
        CylinderSimpleFunction res = head_integral(g, stab);
        CHECK(pointwise_equal(
            res, scale(embed(CylinderSimpleFunction::constant(ambient, Rat(1)), res.level()),
                       integrate(g))));
    }

    // partial head integration against a coordinatewise oracle
    auto two_level = CylinderSimpleFunction(
        cube_ambient(), 2,
        {FunctionTerm{Rat(3), {iv(0, 1, 1, 2), iv(0, 1, 1, 4)}},
         FunctionTerm{Rat(-2), {iv(1, 2, 1, 1), iv(1, 4, 1, 1)}}});
    CylinderSimpleFunction partial = head_integral(two_level, 1);
    // integrate coordinate 1: 3 * 1/2 on [0,1/4), -2 * 1/2 on [1/4,1)
    CylinderSimpleFunction expected(
        cube_ambient(), 2,
        {FunctionTerm{Rat(3, 2), {GeneratorSet::full(), iv(0, 1, 1, 4)}},
         FunctionTerm{Rat(-1), {GeneratorSet::full(), iv(1, 4, 1, 1)}}});
    CHECK(pointwise_equal(partial, expected));
}

TEST_CASE("level sequences and the isometry pair") {
    auto f = two_on_half(cube_ambient());
    LevelSequence s = to_level_sequence(f);
    CHECK(s.start == 1);
    CHECK(pointwise_equal(s.rep, f));  // unit tail: nothing to scale

    // round trips are exact
    CHECK(pointwise_equal(from_level_sequence(s), f));

    // a constant function on a shrunk ambient: the representative absorbs
    // the full tail product and division recovers the constant exactly
    auto c = CylinderSimpleFunction::constant(shrunk_ambient(), Rat(5, 3));
    LevelSequence cs = to_level_sequence(c);
    CHECK(cs.start == 0);
    CHECK(pointwise_equal(cs.rep, scale(c, Rat(3, 8))));  // vol of the ambient
    CHECK(pointwise_equal(from_level_sequence(cs), c));
    CHECK(sequence_norm_pow(cs, 1) == integrate_abs_pow(c, 1));
    // early components of a level-1 sequence are its tail integrals
    CHECK(pointwise_equal(sequence_component(s, 0),
                          CylinderSimpleFunction::constant(cube_ambient(), Rat(1))));

    std::mt19937_64 rng(127);
    for (int round = 0; round < 50; ++round) {
        AmbientPtr ambient = round % 2 ? cube_ambient() : shrunk_ambient();
        auto g = random_function(rng, ambient);
        LevelSequence seq = to_level_sequence(g);

        // isometry, exactly, for p in {1,2}
        CHECK(sequence_norm_pow(seq, 1) == integrate_abs_pow(g, 1));
        CHECK(sequence_norm_pow(seq, 2) == integrate_abs_pow(g, 2));

        // inverse pair
        CHECK(pointwise_equal(from_level_sequence(seq), g));
        CHECK(sequence_equal(to_level_sequence(from_level_sequence(seq)), seq));
    }
}

TEST_CASE("norms of level sequences") {
    LevelSequence s = to_level_sequence(two_on_half(cube_ambient()));
    CHECK(sequence_norm(s, Rat(1)).is_point());
    CHECK(sequence_norm(s, Rat(1)).lo == Rat(1));

    // scaling
    LevelSequence twice{s.start, scale(s.rep, Rat(3))};
    CHECK(sequence_norm_pow(twice, 1) == Rat(3) * sequence_norm_pow(s, 1));

    // agreement with the norm of the recovered function
    std::mt19937_64 rng(131);
    for (int round = 0; round < 30; ++round) {
        AmbientPtr ambient = round % 2 ? cube_ambient() : shrunk_ambient();
        auto g = random_function(rng, ambient);
        LevelSequence seq = to_level_sequence(g);
        CHECK(sequence_norm_pow(seq, 1) == integrate_abs_pow(from_level_sequence(seq), 1));
        CHECK(sequence_norm_pow(seq, 2) == integrate_abs_pow(from_level_sequence(seq), 2));
    }
}

TEST_CASE("truncation approximants") {
    // explicit two-level example, distance computed by hand:
    // f = indicator([0,1/2)^2), F^1 component is (1/2) indicator([0,1/2)),
    // the level-2 difference has |.|_1 = 1/4
    auto f = CylinderSimpleFunction(cube_ambient(), 2,
                                    {FunctionTerm{Rat(1), {iv(0, 1, 1, 2), iv(0, 1, 1, 2)}}});
    LevelSequence s = to_level_sequence(f);
    LevelSequence f1 = sequence_truncate(s, 1);
    CHECK(sequence_norm_pow(sequence_sub(f1, s), 1) == Rat(1, 4));

    // at or past the stabilization index the distance is zero
    LevelSequence f2 = sequence_truncate(s, 2);
    CHECK(sequence_equal(f2, s));
    CHECK(sequence_norm_pow(sequence_sub(f2, s), 1) == Rat(0));
    LevelSequence f5 = sequence_truncate(s, 5);
    CHECK(sequence_equal(f5, s));

    // the zero sequence truncates to itself
    LevelSequence z = to_level_sequence(CylinderSimpleFunction::zero(cube_ambient()));
    CHECK(sequence_equal(sequence_truncate(z, 3), z));

    std::mt19937_64 rng(137);
    for (int round = 0; round < 20; ++round) {
        auto g = random_function(rng, shrunk_ambient());
        LevelSequence seq = to_level_sequence(g);
        for (std::size_t m = seq.start; m < seq.start + 3; ++m)
            CHECK(sequence_equal(sequence_truncate(seq, m), seq));
    }
}
