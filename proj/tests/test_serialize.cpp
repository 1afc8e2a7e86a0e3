#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodmeas/serialize.hpp"

using namespace prodmeas;

namespace {

GeneratorSet random_set(std::mt19937_64& rng) {
    switch (rng() % 4) {
        case 0: return GeneratorSet::full();
        case 1: {
            long a = static_cast<long>(rng() % 12) - 6;
            long w = 1 + static_cast<long>(rng() % 6);
            long c = a + w + 1 + static_cast<long>(rng() % 4);
            return GeneratorSet::pieces(
                {HalfOpen{Rat(a, 3), Rat(a + w, 3)}, HalfOpen{Rat(c, 3), Rat(c + 2, 3)}});
        }
        case 2: return GeneratorSet::co_pieces({HalfOpen{Rat(0), Rat(1 + static_cast<long>(rng() % 5))}});
        default: return GeneratorSet::atom_set({"a", "c"});
    }
}

}  // namespace

TEST_CASE("sets round trip") {
    std::mt19937_64 rng(179);
    for (int i = 0; i < 100; ++i) {
        GeneratorSet s = random_set(rng);
        CHECK(set_from_json(json_of_set(s), "t") == s);
    }
    CHECK(set_from_json(Json("full"), "t").is_full());
    CHECK_THROWS_AS(set_from_json(Json("fulll"), "t"), parse_error);
    CHECK_THROWS_AS(set_from_json(Json(3.14), "t"), parse_error);
}

TEST_CASE("rules round trip") {
    std::vector<SequenceRule> rules = {
        SequenceRule::eventually_constant({Rat(1, 2), Rat(3)}, Rat(1)),
        SequenceRule::periodic({Rat(2), Rat(1, 2)}),
        SequenceRule::one_minus_geometric(Rat(1), Rat(1, 2)),
        SequenceRule::geometric_log(Rat(-2), Rat(1, 3)),
        SequenceRule::alternating_harmonic_exp(),
    };
    for (const auto& rule : rules) CHECK(rule_from_json(json_of_rule(rule), "t") == rule);
}

TEST_CASE("rectangles round trip") {
    auto factors = std::make_shared<FactorSequence>(
        FactorSequence::uniform(FactorSpace::unit_interval()));
    std::vector<Rectangle> rects = {
        Rectangle(factors, {GeneratorSet::interval(Rat(0), Rat(1, 2))}, FullTail{}),
        Rectangle(factors,
                  {GeneratorSet::interval(Rat(0), Rat(1, 2)),
                   GeneratorSet::interval(Rat(1, 4), Rat(3, 4))},
                  GeneralTail{Rat(0), SequenceRule::one_minus_geometric(Rat(1), Rat(2, 3))}),
        Rectangle::full_space(factors),
    };
    for (const auto& r : rects)
        CHECK(rect_from_json(factors, json_of_rect(r), "t") == r);

    auto lines = line_factor_sequence();
    Rectangle cube(lines, {GeneratorSet::interval(Rat(2), Rat(3))},
                   UnitTail{GeneratorSet::interval(Rat(0), Rat(1))});
    CHECK(rect_from_json(lines, json_of_rect(cube), "t") == cube);
}

TEST_CASE("problem file parsing and reference resolution") {
    const std::string text = R"({
      "version": "1",
      "factors": {"kind": "unit_interval"},
      "objects": {
        "r1": {"type": "rectangle", "head": [[["0", "1/2"]]], "tail": {"kind": "full"}},
        "r2": {"type": "rectangle", "head": [[["1/2", "1"]]], "tail": {"kind": "full"}},
        "u": {"type": "union", "members": ["r1", "r2"]},
        "rule": {"type": "rule", "tag": "periodic", "pattern": ["2", "1/2"]},
        "cov": {"type": "cover", "elements": ["r1", "r2"], "target": "u"}
      }
    })";
    ProblemFile pf = ProblemFile::parse(text);
    CHECK(pf.factors()->tail_template().kind == FactorKind::UnitInterval);
    CHECK(pf.rectangle("r1").head_size() == 1);
    CHECK(pf.rect_union("u").members().size() == 2);
    CHECK(classify_product(pf.rule("rule"), Rat(1, 100)).is_indeterminate());
    CHECK(pf.cover("cov").cover.size() == 2);

    CHECK_THROWS_AS(pf.rectangle("nope"), parse_error);
    CHECK_THROWS_AS(pf.rule("r1"), parse_error);
    CHECK_THROWS_AS(ProblemFile::parse("{"), parse_error);
    CHECK_THROWS_AS(ProblemFile::parse(R"({"version": "2"})"), parse_error);
    CHECK_THROWS_AS(ProblemFile::parse(R"({"version": "1", "objects": []})"), parse_error);
}

TEST_CASE("rationals never pass through floating literals") {
    CHECK_THROWS_AS(rat_from_json(Json(0.5), "t"), parse_error);
    CHECK(rat_from_json(Json("1/3"), "t") == Rat(1, 3));
    CHECK(json_of_rat(Rat(-7, 2)) == "-7/2");
}
