// Command-line front end: parse a problem file, dispatch to the library,
// emit one JSON document. Exit codes: 0 success, 2 violated precondition,
// 3 inconclusive convergence, 4 parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "prodmeas/prodmeas.hpp"

namespace pm = prodmeas;
using pm::Json;
using pm::Rat;

namespace {

struct Options {
    std::string file;
    std::string name, a, b, c, ambient_name, target;
    std::string p = "1";
    std::string precision = "1/1000000000";
    std::string shift;
    std::size_t depth = 16;
    std::size_t coord = 1;
    std::size_t n = 1;
    std::size_t k = 1;
};

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw pm::parse_error("cannot open file \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

pm::ProblemFile load(const Options& opt) { return pm::ProblemFile::parse(read_input(opt.file)); }

std::map<std::size_t, Rat> parse_shift(const std::string& text) {
    std::map<std::size_t, Rat> shift;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw pm::parse_error("shift entries look like coord=value");
        shift[std::stoul(item.substr(0, eq))] = pm::parse_rational(item.substr(eq + 1));
    }
    return shift;
}

void emit(Json out) {
    std::cout << out.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// The built-in deterministic check suite.

Json run_check_all() {
    Json checks = Json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool pass, Json value) {
        checks.push_back(Json{{"name", name}, {"status", pass ? "pass" : "fail"},
                              {"value", std::move(value)}});
        all = all && pass;
    };

    auto unit_seq = std::make_shared<pm::FactorSequence>(
        pm::FactorSequence::uniform(pm::FactorSpace::unit_interval()));
    auto line_seq = pm::line_factor_sequence();
    auto interval = [](long an, long ad, long bn, long bd) {
        return pm::GeneratorSet::interval(Rat(an, ad), Rat(bn, bd));
    };

    {  // oscillating sequence: no classical value, plus product zero
        auto alternating = pm::SequenceRule::periodic({Rat(2), Rat(1, 2)});
        pm::ProductValue classical = pm::classify_product(alternating, Rat(1, 1000000));
        record("product.classify.alternating", classical.is_indeterminate(),
               pm::json_of_value(classical));
        pm::ProductValue plus = pm::plus_product(alternating);
        record("product.plus.alternating", plus.is_zero(), pm::json_of_value(plus));
        pm::ProductValue ones = pm::plus_product(pm::SequenceRule::constant(Rat(1)));
        record("product.plus.all-ones", ones == pm::ProductValue::exact(Rat(1)),
               pm::json_of_value(ones));
    }
    {  // conditionally convergent exponents: interval around 2, plus product 0
        auto rule = pm::SequenceRule::alternating_harmonic_exp();
        pm::ProductValue v = pm::classify_product(rule, Rat(1, 1000000000));
        bool ok = v.is_interval() && v.bounds().contains(Rat(2)) &&
                  v.bounds().width() <= Rat(1, 1000000000);
        record("product.classify.alternating-harmonic-exp", ok, pm::json_of_value(v));
        pm::ProductValue plus = pm::plus_product(rule);
        record("product.plus.alternating-harmonic-exp", plus.is_zero(), pm::json_of_value(plus));
    }
    {  // volumes
        pm::Rectangle sixth(unit_seq, {interval(0, 1, 1, 2), interval(0, 1, 1, 3)}, pm::FullTail{});
        pm::ProductValue v = pm::vol(sixth);
        record("vol.sixth", v == pm::ProductValue::exact(Rat(1, 6)), pm::json_of_value(v));
        pm::Rectangle cube(line_seq, {interval(2, 1, 3, 1), interval(-1, 1, 0, 1)},
                           pm::UnitTail{interval(0, 1, 1, 1)});
        record("vol.unit-cube", pm::vol(cube) == pm::ProductValue::exact(Rat(1)),
               pm::json_of_value(pm::vol(cube)));
    }
    {  // premeasure of the two halves
        pm::Rectangle left(unit_seq, {interval(0, 1, 1, 2)}, pm::FullTail{});
        pm::Rectangle right(unit_seq, {interval(1, 2, 1, 1)}, pm::FullTail{});
        pm::ProductValue v = pm::premeasure(pm::RectUnion::of({left, right}));
        record("measure.union.halves", v == pm::ProductValue::exact(Rat(1)), pm::json_of_value(v));
    }
    {  // caratheodory split
        pm::Rectangle b(unit_seq, {interval(0, 1, 3, 4)}, pm::FullTail{});
        pm::Rectangle c(unit_seq, {interval(0, 1, 1, 2)}, pm::FullTail{});
        pm::SplitCheck sc = pm::split_check(pm::RectUnion::of({b}), c);
        record("measure.split.three-quarters", sc.equal,
               Json{{"lhs", pm::json_of_value(sc.lhs)},
                    {"in", pm::json_of_value(sc.rhs_in)},
                    {"out", pm::json_of_value(sc.rhs_out)}});
    }
    {  // overlapping cover of the whole space
        pm::Rectangle target(unit_seq, {}, pm::FullTail{});
        pm::Rectangle wide(unit_seq, {interval(0, 1, 3, 4)}, pm::FullTail{});
        pm::Rectangle rest(unit_seq, {interval(1, 2, 1, 1)}, pm::FullTail{});
        pm::CoverBound cb =
            pm::subadditivity_bound(pm::CoverPrefix{{wide, rest}, pm::RectUnion::of({target})});
        record("measure.cover-bound.five-quarters",
               cb.slack && *cb.slack == Rat(1, 4) && cb.bound == pm::ProductValue::exact(Rat(5, 4)),
               Json{{"bound", pm::json_of_value(cb.bound)},
                    {"exact", pm::json_of_value(cb.exact)}});
    }
    {  // disjoint unit-measure family
        auto fam = pm::binary_family(line_seq, 3);
        bool disjoint = !pm::verify_pairwise_disjoint(fam).has_value();
        pm::ProductValue total = pm::premeasure(fam);
        record("measure.binary-family.k3",
               disjoint && fam.size() == 8 && total == pm::ProductValue::exact(Rat(8)),
               pm::json_of_value(total));
    }
    {  // jessen stabilization and the isometry pair
        auto ambient = std::make_shared<pm::AmbientSpace>(pm::Rectangle::full_space(unit_seq));
        pm::CylinderSimpleFunction f(ambient, 1,
                                     {pm::FunctionTerm{Rat(2), {interval(0, 1, 1, 2)}}});
        bool tail_ok = pm::pointwise_equal(pm::tail_integral(f, 2), f);
        bool head_ok = pm::pointwise_equal(
            pm::head_integral(f, 1), pm::CylinderSimpleFunction::constant(ambient, Rat(1)));
        record("lp.jessen.stabilization", tail_ok && head_ok, Json{{"integral", "1"}});

        pm::LevelSequence s = pm::to_level_sequence(f);
        bool iso = pm::sequence_norm_pow(s, 1) == pm::integrate_abs_pow(f, 1);
        bool round = pm::pointwise_equal(pm::from_level_sequence(s), f);
        record("lp.isometry.roundtrip", iso && round,
               Json{{"norm", pm::format_rational(pm::sequence_norm_pow(s, 1))}});
    }
    {  // cube decomposition
        auto free_line = pm::line_ambient(interval(0, 1, 1, 1));
        pm::CylinderSimpleFunction f(
            free_line, 1,
            {pm::FunctionTerm{Rat(3), {interval(0, 1, 1, 1)}},
             pm::FunctionTerm{Rat(5), {interval(1, 1, 2, 1)}}});
        pm::CubeBreakdown bd = pm::integral_by_cubes(f, 1);
        record("rn.decompose.pair", bd.total == Rat(8) && bd.per_cube.size() == 2,
               pm::json_of_rat(bd.total));
        pm::DirectSumElement e = pm::to_cube_components(f);
        record("rn.oplus.squared", pm::oplus_norm_pow(e, 2) == Rat(34),
               pm::json_of_rat(pm::oplus_norm_pow(e, 2)));
        pm::CylinderSimpleFunction split(
            free_line, 1, {pm::FunctionTerm{Rat(1), {interval(1, 2, 3, 2)}}});
        pm::CubeBreakdown half = pm::integral_by_cubes(split, 1);
        record("rn.decompose.split-cell",
               half.total == Rat(1) && half.per_cube.size() == 2 &&
                   half.per_cube[0].second == Rat(1, 2),
               pm::json_of_rat(half.total));
        record("rn.roundtrip", pm::pointwise_equal(pm::from_cube_components(e), f), true);
    }
    {  // the coordinate cube and the embedding
        pm::CoordinateRectangle q = pm::CoordinateRectangle::unit_cube();
        record("banach.cube.measure", pm::space_measure(q) == Rat(1),
               pm::json_of_rat(pm::space_measure(q)));
        pm::CoordinateFunction f;
        f.terms.push_back(pm::FunctionTerm{Rat(4), {}});
        pm::SpaceIntegral si = pm::integrate_on_space(f, 1);
        record("banach.integrate.four-on-cube", si.agree && si.direct == Rat(4),
               pm::json_of_rat(si.direct));
        pm::CoordinateRectangle moved = pm::translate_coordinate_rect(q, {{2, Rat(7, 3)}});
        record("banach.translate.invariance", pm::space_measure(moved) == Rat(1),
               pm::json_of_rat(pm::space_measure(moved)));
    }

    return Json{{"command", "check all"}, {"checks", checks}, {"all_pass", all}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact countable product measures"};
    app.require_subcommand(1);
    Options opt;

    app.add_option("--file", opt.file, "problem file (default: stdin)")->capture_default_str();

    // vol
    CLI::App* cmd_vol = app.add_subcommand("vol", "volume of a rectangle");
    cmd_vol->add_option("--name", opt.name)->required();
    cmd_vol->add_option("--precision", opt.precision);

    // product
    CLI::App* cmd_product = app.add_subcommand("product", "infinite products");
    CLI::App* product_classify = cmd_product->add_subcommand("classify");
    product_classify->add_option("--name", opt.name)->required();
    product_classify->add_option("--precision", opt.precision);
    CLI::App* product_plus = cmd_product->add_subcommand("plus");
    product_plus->add_option("--name", opt.name)->required();
    product_plus->add_option("--precision", opt.precision);
    CLI::App* product_compare = cmd_product->add_subcommand("compare");
    product_compare->add_option("--a", opt.a)->required();
    product_compare->add_option("--b", opt.b)->required();
    product_compare->add_option("--precision", opt.precision);

    // set
    CLI::App* cmd_set = app.add_subcommand("set", "one-coordinate set algebra");
    CLI::App* set_intersect_cmd = cmd_set->add_subcommand("intersect");
    set_intersect_cmd->add_option("--a", opt.a)->required();
    set_intersect_cmd->add_option("--b", opt.b)->required();
    set_intersect_cmd->add_option("--coord", opt.coord);
    CLI::App* set_complement_cmd = cmd_set->add_subcommand("complement");
    set_complement_cmd->add_option("--name", opt.name,
                                   "a set (one-coordinate complement) or a rectangle "
                                   "(complement stream)")
        ->required();
    set_complement_cmd->add_option("--ambient", opt.ambient_name);
    set_complement_cmd->add_option("--coord", opt.coord);
    set_complement_cmd->add_option("--depth", opt.depth, "stream truncation depth");
    CLI::App* set_refine_cmd = cmd_set->add_subcommand("refine");
    set_refine_cmd->add_option("--names", opt.name, "comma-separated rectangle names (overlap ok)")
        ->required();

    // measure
    CLI::App* cmd_measure = app.add_subcommand("measure", "premeasure layer");
    CLI::App* measure_union = cmd_measure->add_subcommand("union");
    measure_union->add_option("--name", opt.name)->required();
    measure_union->add_option("--precision", opt.precision);
    CLI::App* measure_split = cmd_measure->add_subcommand("split");
    measure_split->add_option("--b", opt.b)->required();
    measure_split->add_option("--c", opt.c)->required();
    CLI::App* measure_cover = cmd_measure->add_subcommand("cover-bound");
    measure_cover->add_option("--name", opt.name)->required();
    measure_cover->add_option("--precision", opt.precision);
    CLI::App* measure_binary = cmd_measure->add_subcommand("binary-family");
    measure_binary->add_option("--k", opt.k)->required();
    CLI::App* measure_translate = cmd_measure->add_subcommand("translate");
    measure_translate->add_option("--name", opt.name)->required();
    measure_translate->add_option("--shift", opt.shift)->required();

    // lp
    CLI::App* cmd_lp = app.add_subcommand("lp", "Lp decomposition");
    CLI::App* lp_integrate = cmd_lp->add_subcommand("integrate");
    lp_integrate->add_option("--name", opt.name)->required();
    CLI::App* lp_norm_cmd = cmd_lp->add_subcommand("norm");
    lp_norm_cmd->add_option("--name", opt.name)->required();
    lp_norm_cmd->add_option("--p", opt.p);
    lp_norm_cmd->add_option("--precision", opt.precision);
    CLI::App* lp_jessen = cmd_lp->add_subcommand("jessen");
    lp_jessen->add_option("--name", opt.name)->required();
    lp_jessen->add_option("--n", opt.n)->required();
    CLI::App* lp_frakS = cmd_lp->add_subcommand("frakS");
    lp_frakS->add_option("--name", opt.name)->required();
    CLI::App* lp_frakT = cmd_lp->add_subcommand("frakT");
    lp_frakT->add_option("--name", opt.name)->required();
    CLI::App* lp_roundtrip = cmd_lp->add_subcommand("roundtrip");
    lp_roundtrip->add_option("--name", opt.name)->required();

    // rn
    CLI::App* cmd_rn = app.add_subcommand("rn", "line-product decomposition");
    CLI::App* rn_support = cmd_rn->add_subcommand("support");
    rn_support->add_option("--name", opt.name)->required();
    CLI::App* rn_decompose = cmd_rn->add_subcommand("decompose");
    rn_decompose->add_option("--name", opt.name)->required();
    rn_decompose->add_option("--p", opt.p);
    CLI::App* rn_frakP = cmd_rn->add_subcommand("frakP");
    rn_frakP->add_option("--name", opt.name)->required();
    CLI::App* rn_roundtrip = cmd_rn->add_subcommand("roundtrip");
    rn_roundtrip->add_option("--name", opt.name)->required();

    // banach
    CLI::App* cmd_banach = app.add_subcommand("banach", "coordinate-space measure");
    std::string basis_name;
    cmd_banach->add_option("--basis", basis_name, "named basis preset to validate and echo");
    CLI::App* banach_cube = cmd_banach->add_subcommand("cube");
    CLI::App* banach_measure = cmd_banach->add_subcommand("measure");
    banach_measure->add_option("--name", opt.name)->required();
    CLI::App* banach_embed = cmd_banach->add_subcommand("embed");
    banach_embed->add_option("--name", opt.name)->required();
    banach_embed->add_option("--p", opt.p);
    CLI::App* banach_integrate = cmd_banach->add_subcommand("integrate");
    banach_integrate->add_option("--name", opt.name)->required();
    banach_integrate->add_option("--p", opt.p);

    // check
    CLI::App* cmd_check = app.add_subcommand("check", "verification suites");
    cmd_check->add_subcommand("all");

    for (CLI::App* group : {cmd_product, cmd_set, cmd_measure, cmd_lp, cmd_rn, cmd_banach, cmd_check})
        group->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    try {
        const Rat precision = pm::parse_rational(opt.precision);

        if (cmd_vol->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "vol"},
                      {"value", pm::json_of_value(pm::vol(pf.rectangle(opt.name), precision))}});
        } else if (product_classify->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "product classify"},
                      {"value",
                       pm::json_of_value(pm::classify_product(pf.rule(opt.name), precision))}});
        } else if (product_plus->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "product plus"},
                      {"value", pm::json_of_value(pm::plus_product(pf.rule(opt.name), precision))}});
        } else if (product_compare->parsed()) {
            auto pf = load(opt);
            pm::ProductValue a_val =
                pm::compare_products(pf.rule(opt.a), pf.rule(opt.b), precision);
            emit(Json{{"command", "product compare"},
                      {"value", pm::json_of_value(a_val)},
                      {"bound", pm::json_of_value(pm::classify_product(pf.rule(opt.b), precision))}});
        } else if (set_intersect_cmd->parsed()) {
            auto pf = load(opt);
            const auto& factor = pf.factors()->at(opt.coord);
            emit(Json{{"command", "set intersect"},
                      {"value", pm::json_of_set(pm::set_intersect(factor, pf.set_object(opt.a),
                                                                  pf.set_object(opt.b)))}});
        } else if (set_complement_cmd->parsed()) {
            auto pf = load(opt);
            if (pf.type_of(opt.name) == "rectangle") {
                // the complement of a rectangle: a stream of disjoint
                // cylinders, truncated at --depth, with the exhaustion flag
                pm::ComplementStream cs =
                    pm::complement_stream(pf.rectangle(opt.name), opt.depth);
                Json terms = Json::array();
                for (const auto& t : cs.terms) terms.push_back(pm::json_of_rect(t));
                emit(Json{{"command", "set complement"},
                          {"depth", opt.depth},
                          {"terms", terms},
                          {"exhausted", cs.exhausted}});
            } else {
                const auto& factor = pf.factors()->at(opt.coord);
                pm::GeneratorSet ambient = opt.ambient_name.empty()
                                               ? pm::GeneratorSet::full()
                                               : pf.set_object(opt.ambient_name);
                emit(Json{{"command", "set complement"},
                          {"value", pm::json_of_set(pm::set_complement_within(
                                        factor, pf.set_object(opt.name), ambient))}});
            }
        } else if (set_refine_cmd->parsed()) {
            auto pf = load(opt);
            std::vector<pm::Rectangle> inputs;
            std::stringstream names(opt.name);
            std::string one;
            while (std::getline(names, one, ',')) inputs.push_back(pf.rectangle(one));
            pm::RefineResult rr = pm::refine(inputs);
            Json atoms = Json::array();
            for (std::size_t i = 0; i < rr.atoms.size(); ++i) {
                Json row = Json::array();
                for (bool b : rr.membership[i]) row.push_back(b);
                atoms.push_back(
                    Json{{"atom", pm::json_of_rect(rr.atoms[i])}, {"member_of", row}});
            }
            emit(Json{{"command", "set refine"}, {"atom_count", rr.atoms.size()}, {"atoms", atoms}});
        } else if (measure_union->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "measure union"},
                      {"value",
                       pm::json_of_value(pm::premeasure(pf.rect_union(opt.name), precision))}});
        } else if (measure_split->parsed()) {
            auto pf = load(opt);
            pm::SplitCheck sc = pm::split_check(pf.rect_union(opt.b), pf.rectangle(opt.c));
            emit(Json{{"command", "measure split"},
                      {"lhs", pm::json_of_value(sc.lhs)},
                      {"rhs_in", pm::json_of_value(sc.rhs_in)},
                      {"rhs_out", pm::json_of_value(sc.rhs_out)},
                      {"equal", sc.equal}});
        } else if (measure_cover->parsed()) {
            auto pf = load(opt);
            pm::CoverBound cb = pm::subadditivity_bound(pf.cover(opt.name), precision);
            Json out{{"command", "measure cover-bound"},
                     {"bound", pm::json_of_value(cb.bound)},
                     {"exact", pm::json_of_value(cb.exact)}};
            if (cb.slack) out["slack"] = pm::json_of_rat(*cb.slack);
            emit(out);
        } else if (measure_binary->parsed()) {
            auto pf = load(opt);
            auto fam = pm::binary_family(pf.factors(), opt.k);
            Json rects = Json::array();
            for (const auto& r : fam) rects.push_back(pm::json_of_rect(r));
            emit(Json{{"command", "measure binary-family"},
                      {"count", fam.size()},
                      {"union_measure", pm::json_of_value(pm::premeasure(fam))},
                      {"rectangles", rects}});
        } else if (measure_translate->parsed()) {
            auto pf = load(opt);
            pm::Rectangle before = pf.rectangle(opt.name);
            pm::Rectangle after = pm::translate_rect(before, parse_shift(opt.shift));
            emit(Json{{"command", "measure translate"},
                      {"rectangle", pm::json_of_rect(after)},
                      {"vol_before", pm::json_of_value(pm::vol(before))},
                      {"vol_after", pm::json_of_value(pm::vol(after))}});
        } else if (lp_integrate->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "lp integrate"},
                      {"value", pm::json_of_rat(pm::integrate(pf.function(opt.name)))}});
        } else if (lp_norm_cmd->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "lp norm"},
                      {"p", opt.p},
                      {"value", pm::json_of_interval(pm::lp_norm(
                                    pf.function(opt.name), pm::parse_rational(opt.p), precision))}});
        } else if (lp_jessen->parsed()) {
            auto pf = load(opt);
            pm::CylinderSimpleFunction f = pf.function(opt.name);
            emit(Json{{"command", "lp jessen"},
                      {"n", opt.n},
                      {"tail_integral", pm::json_of_function(pm::tail_integral(f, opt.n))},
                      {"head_integral", pm::json_of_function(pm::head_integral(f, opt.n))}});
        } else if (lp_frakS->parsed()) {
            auto pf = load(opt);
            pm::LevelSequence s = pm::to_level_sequence(pf.function(opt.name));
            emit(Json{{"command", "lp frakS"},
                      {"start", s.start},
                      {"rep", pm::json_of_function(s.rep)}});
        } else if (lp_frakT->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "lp frakT"},
                      {"function",
                       pm::json_of_function(pm::from_level_sequence(pf.level_sequence(opt.name)))}});
        } else if (lp_roundtrip->parsed()) {
            auto pf = load(opt);
            pm::CylinderSimpleFunction f = pf.function(opt.name);
            pm::LevelSequence s = pm::to_level_sequence(f);
            bool back = pm::pointwise_equal(pm::from_level_sequence(s), f);
            bool forth = pm::sequence_equal(pm::to_level_sequence(pm::from_level_sequence(s)), s);
            emit(Json{{"command", "lp roundtrip"},
                      {"frakT_of_frakS_is_identity", back},
                      {"frakS_of_frakT_is_identity", forth},
                      {"norm1_function", pm::json_of_rat(pm::integrate_abs_pow(f, 1))},
                      {"norm1_sequence", pm::json_of_rat(pm::sequence_norm_pow(s, 1))}});
        } else if (rn_support->parsed()) {
            auto pf = load(opt);
            Json idx = Json::array();
            for (const auto& i : pm::cube_support(pf.function(opt.name)))
                idx.push_back(pm::json_of_cube_index(i));
            emit(Json{{"command", "rn support"}, {"support", idx}});
        } else if (rn_decompose->parsed()) {
            auto pf = load(opt);
            unsigned p = static_cast<unsigned>(std::stoul(opt.p));
            pm::CubeBreakdown bd = pm::integral_by_cubes(pf.function(opt.name), p);
            Json per = Json::array();
            for (const auto& [idx, share] : bd.per_cube)
                per.push_back(Json{{"cube", pm::json_of_cube_index(idx)},
                                   {"value", pm::json_of_rat(share)}});
            emit(Json{{"command", "rn decompose"},
                      {"p", p},
                      {"total", pm::json_of_rat(bd.total)},
                      {"per_cube", per}});
        } else if (rn_frakP->parsed()) {
            auto pf = load(opt);
            pm::DirectSumElement e = pm::to_cube_components(pf.function(opt.name));
            Json parts = Json::array();
            for (const auto& [idx, g] : e.parts())
                parts.push_back(Json{{"cube", pm::json_of_cube_index(idx)},
                                     {"component", pm::json_of_function(g)}});
            emit(Json{{"command", "rn frakP"},
                      {"parts", parts},
                      {"norm1", pm::json_of_rat(pm::oplus_norm_pow(e, 1))}});
        } else if (rn_roundtrip->parsed()) {
            auto pf = load(opt);
            pm::CylinderSimpleFunction f = pf.function(opt.name);
            pm::DirectSumElement e = pm::to_cube_components(f);
            bool back = pm::pointwise_equal(pm::from_cube_components(e), f);
            bool iso1 = pm::oplus_norm_pow(e, 1) == pm::integrate_abs_pow(f, 1);
            bool iso2 = pm::oplus_norm_pow(e, 2) == pm::integrate_abs_pow(f, 2);
            emit(Json{{"command", "rn roundtrip"},
                      {"inverse_is_identity", back},
                      {"isometry_p1", iso1},
                      {"isometry_p2", iso2}});
        } else if (banach_cube->parsed()) {
            pm::CoordinateRectangle q = pm::CoordinateRectangle::unit_cube();
            Json out{{"command", "banach cube"},
                     {"image", pm::json_of_rect(pm::coordinate_image(q))},
                     {"measure", pm::json_of_rat(pm::space_measure(q))}};
            if (!basis_name.empty()) {
                pm::ScaledBasisSpec basis = load(opt).basis(basis_name);
                out["basis"] = basis.space_label;
                out["scaling_sum"] = pm::json_of_rat(basis.scaling_sum());
            }
            emit(out);
        } else if (banach_measure->parsed()) {
            auto pf = load(opt);
            emit(Json{{"command", "banach measure"},
                      {"value",
                       pm::json_of_rat(pm::space_measure(pf.coordinate_rectangle(opt.name)))}});
        } else if (banach_embed->parsed()) {
            auto pf = load(opt);
            unsigned p = static_cast<unsigned>(std::stoul(opt.p));
            pm::CoordinateFunction f = pf.coordinate_function(opt.name);
            pm::CylinderSimpleFunction g = pm::embed_function(f);
            Rat space_side = pm::space_norm_pow(f, p);
            Rat line_side = pm::integrate_abs_pow(g, p);
            emit(Json{{"command", "banach embed"},
                      {"p", p},
                      {"function", pm::json_of_function(g)},
                      {"space_norm_pow", pm::json_of_rat(space_side)},
                      {"embedded_norm_pow", pm::json_of_rat(line_side)},
                      {"isometric", space_side == line_side}});
        } else if (banach_integrate->parsed()) {
            auto pf = load(opt);
            unsigned p = static_cast<unsigned>(std::stoul(opt.p));
            pm::SpaceIntegral si = pm::integrate_on_space(pf.coordinate_function(opt.name), p);
            Json per = Json::array();
            for (const auto& [idx, share] : si.breakdown.per_cube)
                per.push_back(Json{{"cube", pm::json_of_cube_index(idx)},
                                   {"value", pm::json_of_rat(share)}});
            emit(Json{{"command", "banach integrate"},
                      {"p", p},
                      {"direct", pm::json_of_rat(si.direct)},
                      {"embedded", pm::json_of_rat(si.embedded)},
                      {"per_cube", per},
                      {"decomposed", pm::json_of_rat(si.decomposed)},
                      {"agree", si.agree}});
        } else if (cmd_check->parsed()) {
            Json out = run_check_all();
            emit(out);
            return out["all_pass"].get<bool>() ? 0 : 1;
        } else {
            std::cerr << "no subcommand selected\n";
            return 4;
        }
    } catch (const pm::precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const pm::inconclusive_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 3;
    } catch (const pm::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
