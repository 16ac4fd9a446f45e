#pragma once

#include "ilab/geometry.h"

#include <json.hpp>

namespace ilab {

/// Insertion-ordered so written files are byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// Ascending coefficient strings.
Json to_json(const UPoly& p);
UPoly upoly_from_json(const Json& j);

/// {"nvars": n, "terms": [[exponent, "num/den"], ...]} in graded order.
Json to_json(const MPoly& p);
MPoly mpoly_from_json(const Json& j);

/// {"minpoly": [...], "interval": ["lo", "hi"]}; rationals are plain strings.
Json to_json(const AlgebraicNumber& a);
AlgebraicNumber algebraic_from_json(const Json& j);
Json to_json(const AlgebraicPoint& p);

Json to_json(const RatVec& v);
RatVec ratvec_from_json(const Json& j);

Json to_json(const ParamCurve& c);
ParamCurve curve_from_json(const Json& j);
Json to_json(const SurfacePatch& s);
SurfacePatch surface_from_json(const Json& j);
Json to_json(const Variety& v);
Variety variety_from_json(const Json& j);
Json to_json(const RichPoint& p);
RichPoint rich_point_from_json(const Json& j);

}  // namespace ilab
