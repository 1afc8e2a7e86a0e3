#pragma once

// Problem-file format: one JSON document with a factor sequence and a table
// of named objects. Rationals travel as "num/den" strings (never floating
// literals), intervals as two-element arrays, the whole space as the literal
// "full". Everything re-parses to a structurally equal object.

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prodmeas/banach_space.hpp"
#include "prodmeas/cube_decomp.hpp"
#include "prodmeas/errors.hpp"
#include "prodmeas/lp_space.hpp"
#include "prodmeas/product_arith.hpp"
#include "prodmeas/product_measure.hpp"

namespace prodmeas {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Readers

inline Rat rat_from_json(const Json& j, const std::string& where) {
    if (!j.is_string()) throw parse_error(where + ": rationals are \"num/den\" strings");
    return parse_rational(j.get<std::string>());
}

inline GeneratorSet set_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "full") return GeneratorSet::full();
        throw parse_error(where + ": unknown set literal \"" + j.get<std::string>() + "\"");
    }
    if (j.is_array()) {
        std::vector<HalfOpen> pieces;
        for (const auto& pair : j) {
            if (!pair.is_array() || pair.size() != 2)
                throw parse_error(where + ": intervals are [lo, hi] pairs");
            pieces.push_back(HalfOpen{rat_from_json(pair[0], where), rat_from_json(pair[1], where)});
        }
        return GeneratorSet::pieces(std::move(pieces));
    }
    if (j.is_object()) {
        if (j.contains("atoms")) {
            std::vector<std::string> names;
            for (const auto& a : j["atoms"]) names.push_back(a.get<std::string>());
            return GeneratorSet::atom_set(std::move(names));
        }
        if (j.contains("cofinite")) {
            std::vector<HalfOpen> pieces;
            for (const auto& pair : j["cofinite"])
                pieces.push_back(
                    HalfOpen{rat_from_json(pair[0], where), rat_from_json(pair[1], where)});
            return GeneratorSet::co_pieces(std::move(pieces));
        }
    }
    throw parse_error(where + ": not a set");
}

inline FactorSpace factor_from_json(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error(where + ": factor needs a kind");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "line") return FactorSpace::line();
    if (kind == "unit_interval") return FactorSpace::unit_interval();
    if (kind == "discrete") {
        std::vector<std::pair<std::string, Rat>> atoms;
        for (const auto& a : j.value("atoms", Json::array()))
            atoms.emplace_back(a[0].get<std::string>(), rat_from_json(a[1], where));
        return FactorSpace::discrete(std::move(atoms));
    }
    throw parse_error(where + ": unknown factor kind \"" + kind + "\"");
}

inline FactorSeqPtr factors_from_json(const Json& j) {
    if (j.is_object() && j.contains("prefix")) {
        std::vector<FactorSpace> prefix;
        for (const auto& f : j["prefix"]) prefix.push_back(factor_from_json(f, "factors.prefix"));
        return std::make_shared<FactorSequence>(std::move(prefix),
                                                factor_from_json(j.at("tail"), "factors.tail"));
    }
    return std::make_shared<FactorSequence>(
        FactorSequence::uniform(factor_from_json(j, "factors")));
}

inline SequenceRule rule_from_json(const Json& j, const std::string& where) {
    std::string tag = j.value("tag", "");
    if (tag == "eventually") {
        std::vector<Rat> prefix;
        for (const auto& v : j.value("prefix", Json::array()))
            prefix.push_back(rat_from_json(v, where));
        return SequenceRule::eventually_constant(std::move(prefix),
                                                 rat_from_json(j.at("tail"), where));
    }
    if (tag == "periodic") {
        std::vector<Rat> pattern;
        for (const auto& v : j.at("pattern")) pattern.push_back(rat_from_json(v, where));
        return SequenceRule::periodic(std::move(pattern));
    }
    if (tag == "closedform") {
        std::string family = j.value("family", "");
        if (family == "constant")
            return SequenceRule::constant(rat_from_json(j.at("value"), where));
        if (family == "geometric-log")
            return SequenceRule::geometric_log(rat_from_json(j.at("c"), where),
                                               rat_from_json(j.at("r"), where));
        if (family == "one-minus-geometric")
            return SequenceRule::one_minus_geometric(rat_from_json(j.at("c"), where),
                                                     rat_from_json(j.at("r"), where));
        if (family == "alternating-harmonic-exp") return SequenceRule::alternating_harmonic_exp();
        throw parse_error(where + ": unknown closed-form family \"" + family + "\"");
    }
    throw parse_error(where + ": unknown rule tag \"" + tag + "\"");
}

inline TailSpec tail_from_json(const Json& j, const std::string& where) {
    std::string kind = j.value("kind", "");
    if (kind == "full") return FullTail{};
    if (kind == "unit") return UnitTail{set_from_json(j.at("set"), where + ".set")};
    if (kind == "general")
        return GeneralTail{rat_from_json(j.at("origin"), where),
                           rule_from_json(j.at("widths"), where + ".widths")};
    throw parse_error(where + ": unknown tail kind \"" + kind + "\"");
}

inline Rectangle rect_from_json(const FactorSeqPtr& factors, const Json& j,
                                const std::string& where) {
    std::vector<GeneratorSet> head;
    for (const auto& s : j.value("head", Json::array()))
        head.push_back(set_from_json(s, where + ".head"));
    return Rectangle(factors, std::move(head),
                     tail_from_json(j.value("tail", Json{{"kind", "full"}}), where + ".tail"));
}

inline std::vector<FunctionTerm> terms_from_json(const Json& j, const std::string& where) {
    std::vector<FunctionTerm> terms;
    for (const auto& t : j) {
        FunctionTerm term{rat_from_json(t.at("coeff"), where), {}};
        for (const auto& s : t.value("cell", Json::array()))
            term.cell.push_back(set_from_json(s, where + ".cell"));
        terms.push_back(std::move(term));
    }
    return terms;
}

// ---------------------------------------------------------------------------
// Writers

inline Json json_of_rat(const Rat& q) { return format_rational(q); }

inline Json json_of_set(const GeneratorSet& s) {
    switch (s.tag()) {
        case GeneratorSet::Tag::Full: return "full";
        case GeneratorSet::Tag::Pieces: {
            Json arr = Json::array();
            for (const auto& p : s.intervals())
                arr.push_back(Json::array({json_of_rat(p.lo), json_of_rat(p.hi)}));
            return arr;
        }
        case GeneratorSet::Tag::CoPieces: {
            Json arr = Json::array();
            for (const auto& p : s.intervals())
                arr.push_back(Json::array({json_of_rat(p.lo), json_of_rat(p.hi)}));
            return Json{{"cofinite", arr}};
        }
        case GeneratorSet::Tag::Atoms: {
            Json arr = Json::array();
            for (const auto& a : s.atom_names()) arr.push_back(a);
            return Json{{"atoms", arr}};
        }
    }
    return {};
}

inline Json json_of_rule(const SequenceRule& rule) {
    if (const auto* ec = std::get_if<EventuallyConstant>(&rule.body())) {
        Json prefix = Json::array();
        for (const auto& v : ec->prefix) prefix.push_back(json_of_rat(v));
        return Json{{"tag", "eventually"}, {"prefix", prefix}, {"tail", json_of_rat(ec->tail)}};
    }
    if (const auto* pe = std::get_if<Periodic>(&rule.body())) {
        Json pattern = Json::array();
        for (const auto& v : pe->pattern) pattern.push_back(json_of_rat(v));
        return Json{{"tag", "periodic"}, {"pattern", pattern}};
    }
    const auto& fam = std::get<ClosedForm>(rule.body()).family;
    if (const auto* omg = std::get_if<OneMinusGeometric>(&fam))
        return Json{{"tag", "closedform"},
                    {"family", "one-minus-geometric"},
                    {"c", json_of_rat(omg->c)},
                    {"r", json_of_rat(omg->r)}};
    if (const auto* gl = std::get_if<GeometricLog>(&fam))
        return Json{{"tag", "closedform"},
                    {"family", "geometric-log"},
                    {"c", json_of_rat(gl->c)},
                    {"r", json_of_rat(gl->r)}};
    return Json{{"tag", "closedform"}, {"family", "alternating-harmonic-exp"}};
}

inline Json json_of_tail(const TailSpec& tail) {
    if (std::holds_alternative<FullTail>(tail)) return Json{{"kind", "full"}};
    if (const auto* ut = std::get_if<UnitTail>(&tail))
        return Json{{"kind", "unit"}, {"set", json_of_set(ut->set)}};
    const auto& gt = std::get<GeneralTail>(tail);
    return Json{{"kind", "general"},
                {"origin", json_of_rat(gt.origin)},
                {"widths", json_of_rule(gt.widths)}};
}

inline Json json_of_rect(const Rectangle& r) {
    Json head = Json::array();
    for (const auto& s : r.head()) head.push_back(json_of_set(s));
    return Json{{"head", head}, {"tail", json_of_tail(r.tail())}};
}

inline Json json_of_value(const ProductValue& v) {
    switch (v.kind()) {
        case ProductValue::Kind::Exact: return json_of_rat(v.exact_value());
        case ProductValue::Kind::Interval:
            return Json::array({json_of_rat(v.lower()), json_of_rat(v.upper())});
        case ProductValue::Kind::PlusInfinity: return "inf";
        case ProductValue::Kind::Indeterminate: return "indeterminate";
    }
    return {};
}

inline Json json_of_interval(const RatInterval& iv) {
    if (iv.is_point()) return json_of_rat(iv.lo);
    return Json::array({json_of_rat(iv.lo), json_of_rat(iv.hi)});
}

inline Json json_of_terms(const std::vector<FunctionTerm>& terms) {
    Json arr = Json::array();
    for (const auto& t : terms) {
        Json cell = Json::array();
        for (const auto& s : t.cell) cell.push_back(json_of_set(s));
        arr.push_back(Json{{"coeff", json_of_rat(t.coeff)}, {"cell", cell}});
    }
    return arr;
}

inline Json json_of_function(const CylinderSimpleFunction& f) {
    return Json{{"level", f.level()}, {"terms", json_of_terms(f.terms())}};
}

inline Json json_of_cube_index(const CubeIndex& idx) {
    Json obj = Json::object();
    for (const auto& [i, v] : idx.offsets) obj[std::to_string(i)] = v;
    return obj;
}

// ---------------------------------------------------------------------------
// Problem files

class ProblemFile {
public:
    static ProblemFile parse(const std::string& text) {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("problem file: ") + e.what());
        }
        if (!doc.is_object()) throw parse_error("problem file: expected an object");
        ProblemFile pf;
        pf.version_ = doc.value("version", "");
        if (pf.version_ != "1") throw parse_error("problem file: unsupported version");
        if (doc.contains("factors")) pf.factors_ = factors_from_json(doc["factors"]);
        pf.objects_ = doc.value("objects", Json::object());
        if (!pf.objects_.is_object()) throw parse_error("problem file: objects must be a table");
        return pf;
    }

    const FactorSeqPtr& factors() const {
        if (!factors_) throw parse_error("problem file: missing factors");
        return factors_;
    }

    const Json& raw(const std::string& name) const {
        if (!objects_.contains(name))
            throw parse_error("problem file: no object named \"" + name + "\"");
        return objects_[name];
    }

    std::string type_of(const std::string& name) const { return raw(name).value("type", ""); }

    Rectangle rectangle(const std::string& name) const {
        const Json& j = raw(name);
        std::string type = j.value("type", "");
        if (type != "rectangle")
            throw parse_error("object \"" + name + "\" is not a rectangle");
        return rect_from_json(factors(), j, name);
    }

    std::vector<Rectangle> rectangle_list(const Json& names, const std::string& where) const {
        std::vector<Rectangle> out;
        if (!names.is_array()) throw parse_error(where + ": expected a list of rectangle names");
        for (const auto& n : names) out.push_back(rectangle(n.get<std::string>()));
        return out;
    }

    RectUnion rect_union(const std::string& name) const {
        const Json& j = raw(name);
        std::string type = j.value("type", "");
        if (type == "rectangle") return RectUnion::of({rectangle(name)});
        if (type == "union")
            return RectUnion::of(rectangle_list(j.value("members", Json::array()), name));
        throw parse_error("object \"" + name + "\" is not a union or rectangle");
    }

    SequenceRule rule(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "rule")
            throw parse_error("object \"" + name + "\" is not a rule");
        return rule_from_json(j, name);
    }

    CoverPrefix cover(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "cover")
            throw parse_error("object \"" + name + "\" is not a cover");
        CoverPrefix cp{rectangle_list(j.value("elements", Json::array()), name),
                       rect_union(j.at("target").get<std::string>())};
        return cp;
    }

    AmbientPtr ambient(const std::string& name) const {
        return std::make_shared<AmbientSpace>(rectangle(name));
    }

    CylinderSimpleFunction function(const std::string& name) const {
        const Json& j = raw(name);
        std::string type = j.value("type", "");
        if (type == "function") {
            AmbientPtr amb = ambient(j.at("ambient").get<std::string>());
            auto terms = terms_from_json(j.value("terms", Json::array()), name);
            std::size_t level = j.value("level", terms.empty() ? 0 : terms[0].cell.size());
            return CylinderSimpleFunction(std::move(amb), level, std::move(terms));
        }
        if (type == "line-function") {
            GeneratorSet tail = j.contains("tail")
                                    ? set_from_json(j["tail"], name + ".tail")
                                    : GeneratorSet::interval(Rat(0), Rat(1));
            AmbientPtr amb = line_ambient(std::move(tail));
            auto terms = terms_from_json(j.value("terms", Json::array()), name);
            std::size_t level = j.value("level", terms.empty() ? 0 : terms[0].cell.size());
            return CylinderSimpleFunction(std::move(amb), level, std::move(terms));
        }
        throw parse_error("object \"" + name + "\" is not a function");
    }

    LevelSequence level_sequence(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "level-sequence")
            throw parse_error("object \"" + name + "\" is not a level sequence");
        AmbientPtr amb = ambient(j.at("ambient").get<std::string>());
        std::size_t start = j.at("start").get<std::size_t>();
        auto terms = terms_from_json(j.value("terms", Json::array()), name);
        return LevelSequence{start, CylinderSimpleFunction(std::move(amb), start, std::move(terms))};
    }

    CoordinateRectangle coordinate_rectangle(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "coordinate-rectangle")
            throw parse_error("object \"" + name + "\" is not a coordinate rectangle");
        std::vector<GeneratorSet> head;
        for (const auto& s : j.value("head", Json::array()))
            head.push_back(set_from_json(s, name + ".head"));
        GeneratorSet tail = j.contains("tail") ? set_from_json(j["tail"], name + ".tail")
                                               : centered_cube_side();
        return CoordinateRectangle(std::move(head), std::move(tail));
    }

    CoordinateFunction coordinate_function(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "coordinate-function")
            throw parse_error("object \"" + name + "\" is not a coordinate function");
        CoordinateFunction f;
        if (j.contains("tail")) f.tail_set = set_from_json(j["tail"], name + ".tail");
        f.terms = terms_from_json(j.value("terms", Json::array()), name);
        return f;
    }

    GeneratorSet set_object(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "set")
            throw parse_error("object \"" + name + "\" is not a set");
        return set_from_json(j.at("value"), name);
    }

    ScaledBasisSpec basis(const std::string& name) const {
        const Json& j = raw(name);
        if (j.value("type", "") != "basis")
            throw parse_error("object \"" + name + "\" is not a basis preset");
        if (j.value("family", "") != "geometric")
            throw parse_error(name + ": the only built-in basis family is \"geometric\"");
        return ScaledBasisSpec(rat_from_json(j.at("ratio"), name), j.value("label", name));
    }

private:
    std::string version_;
    FactorSeqPtr factors_;
    Json objects_;
};

}  // namespace prodmeas
