#include "ilab/serialize.h"

namespace ilab {

namespace {

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

const Json& array_field(const Json& j, const char* key)
{
    const Json& a = field(j, key);
    if (!a.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
    return a;
}

std::string string_field(const Json& j, const char* key)
{
    const Json& s = field(j, key);
    if (!s.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
    return s.get<std::string>();
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ParseError("rational must be a \"num/den\" string");
}

Json to_json(const RatVec& v)
{
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

RatVec ratvec_from_json(const Json& j)
{
    if (!j.is_array()) throw ParseError("expected an array of rationals");
    RatVec v;
    for (const auto& x : j) v.push_back(rational_from_json(x));
    return v;
}

Json to_json(const UPoly& p) { return to_json(p.coeffs()); }

UPoly upoly_from_json(const Json& j) { return UPoly(ratvec_from_json(j)); }

Json to_json(const MPoly& p)
{
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back(Json::array({Json(e), to_json(c)}));
    Json j;
    j["nvars"] = p.nvars();
    j["terms"] = std::move(terms);
    return j;
}

MPoly mpoly_from_json(const Json& j)
{
    const Json& nv = field(j, "nvars");
    if (!nv.is_number_unsigned()) throw ParseError("nvars must be a non-negative integer");
    MPoly p(nv.get<std::size_t>());
    for (const auto& t : array_field(j, "terms")) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_array()) throw ParseError("term must be [exponent, coefficient]");
        Exponent e;
        for (const auto& k : t[0]) {
            if (!k.is_number_unsigned()) throw ParseError("exponent entries must be non-negative integers");
            e.push_back(k.get<int>());
        }
        if (e.size() != p.nvars()) throw ParseError("exponent length differs from nvars");
        p.add_term(e, rational_from_json(t[1]));
    }
    return p;
}

Json to_json(const AlgebraicNumber& a)
{
    if (a.is_rational()) return to_json(a.rational_value());
    Json j;
    j["minpoly"] = to_json(a.minpoly());
    j["interval"] = Json::array({to_json(a.lo()), to_json(a.hi())});
    return j;
}

AlgebraicNumber algebraic_from_json(const Json& j)
{
    if (!j.is_object()) return AlgebraicNumber(rational_from_json(j));
    const Json& iv = array_field(j, "interval");
    if (iv.size() != 2) throw ParseError("interval must have two endpoints");
    return AlgebraicNumber(upoly_from_json(field(j, "minpoly")), rational_from_json(iv[0]), rational_from_json(iv[1]));
}

Json to_json(const AlgebraicPoint& p)
{
    Json a = Json::array();
    for (const auto& x : p) a.push_back(to_json(x));
    return a;
}

Json to_json(const ParamCurve& c)
{
    Json comps = Json::array();
    for (const auto& u : c.components()) comps.push_back(to_json(u));
    Json j;
    j["label"] = c.label();
    j["components"] = std::move(comps);
    return j;
}

ParamCurve curve_from_json(const Json& j)
{
    std::vector<UPoly> comps;
    for (const auto& c : array_field(j, "components")) comps.push_back(upoly_from_json(c));
    return ParamCurve(string_field(j, "label"), std::move(comps));
}

Json to_json(const SurfacePatch& s)
{
    Json j;
    j["label"] = s.label();
    if (s.is_flat()) {
        j["kind"] = "flat";
        j["point"] = to_json(s.flat_point());
        j["u"] = to_json(s.flat_u());
        j["v"] = to_json(s.flat_v());
    } else {
        j["kind"] = "parametrized";
        j["degree"] = s.degree();
        Json comps = Json::array(), impl = Json::array();
        for (const auto& c : s.parametrization()) comps.push_back(to_json(c));
        for (const auto& g : s.implicit_generators()) impl.push_back(to_json(g));
        j["components"] = std::move(comps);
        j["implicit"] = std::move(impl);
    }
    return j;
}

SurfacePatch surface_from_json(const Json& j)
{
    const std::string kind = string_field(j, "kind");
    const std::string label = string_field(j, "label");
    if (kind == "flat")
        return SurfacePatch::flat(label, ratvec_from_json(field(j, "point")), ratvec_from_json(field(j, "u")),
                                  ratvec_from_json(field(j, "v")));
    if (kind == "parametrized") {
        std::vector<MPoly> comps, impl;
        for (const auto& c : array_field(j, "components")) comps.push_back(mpoly_from_json(c));
        if (j.contains("implicit"))
            for (const auto& g : array_field(j, "implicit")) impl.push_back(mpoly_from_json(g));
        const Json& deg = field(j, "degree");
        if (!deg.is_number_integer()) throw ParseError("surface degree must be an integer");
        return SurfacePatch::parametrized(label, std::move(comps), deg.get<int>(), std::move(impl));
    }
    throw ParseError("unknown surface kind '" + kind + "'");
}

Json to_json(const Variety& v)
{
    Json gens = Json::array();
    for (const auto& g : v.generators) gens.push_back(to_json(g));
    Json j;
    j["label"] = v.label;
    j["claimed_dim"] = v.claimed_dim;
    j["degree_bound"] = v.degree_bound;
    j["generators"] = std::move(gens);
    return j;
}

Variety variety_from_json(const Json& j)
{
    Variety v;
    const Json& label = field(j, "label");
    if (!label.is_string()) throw ParseError("variety label must be a string");
    v.label = label.get<std::string>();
    for (const auto& g : array_field(j, "generators")) v.generators.push_back(mpoly_from_json(g));
    const Json& dim = field(j, "claimed_dim");
    const Json& deg = field(j, "degree_bound");
    if (!dim.is_number_integer() || !deg.is_number_integer()) throw ParseError("variety dimension and degree must be integers");
    v.claimed_dim = dim.get<int>();
    v.degree_bound = deg.get<int>();
    return v;
}

Json to_json(const RichPoint& p)
{
    Json j;
    j["coords"] = to_json(p.coords);
    j["labels"] = p.labels;
    return j;
}

RichPoint rich_point_from_json(const Json& j)
{
    RichPoint p;
    for (const auto& c : array_field(j, "coords")) p.coords.push_back(algebraic_from_json(c));
    for (const auto& l : array_field(j, "labels")) {
        if (!l.is_string()) throw ParseError("rich point labels must be strings");
        p.labels.push_back(l.get<std::string>());
    }
    return p;
}

}  // namespace ilab
