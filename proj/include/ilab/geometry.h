#pragma once

#include "ilab/algebraic.h"
#include "ilab/mpoly.h"

#include <optional>
#include <string>
#include <vector>

namespace ilab {

/// Polynomially parametrized curve t -> (c_1(t), ..., c_d(t)).
class ParamCurve {
public:
    ParamCurve() = default;
    /// Throws when every component is constant.
    ParamCurve(std::string label, std::vector<UPoly> components);
    static ParamCurve line(std::string label, const RatVec& point, const RatVec& direction);

    const std::string& label() const { return label_; }
    std::size_t dim() const { return components_.size(); }
    int degree() const;
    bool is_line() const { return degree() == 1; }
    const std::vector<UPoly>& components() const { return components_; }
    RatVec point_at(const Rational& t) const;
    /// Line data; valid only when is_line().
    RatVec base_point() const { return point_at(0); }
    RatVec direction() const;

private:
    std::string label_;
    std::vector<UPoly> components_;
};

/// The line through point with direction, rescaled so the first nonzero
/// direction entry is 1 and the point has 0 in that coordinate.
ParamCurve canonical_line(std::string label, const RatVec& point, const RatVec& direction);

/// t -> f(gamma(t)).
UPoly compose_with_curve(const MPoly& f, const ParamCurve& gamma);
bool curve_contained_in(const ParamCurve& gamma, const MPoly& f);

/// A 2-dimensional object: an affine 2-flat or a polynomial image of the
/// (s, t) plane, optionally with implicit generators vanishing on it.
class SurfacePatch {
public:
    enum class Kind { Flat, Parametrized };

    SurfacePatch() = default;
    /// Throws when u, v are linearly dependent.
    static SurfacePatch flat(std::string label, const RatVec& point, const RatVec& u, const RatVec& v);
    /// components are MPolys in 2 variables (s, t). Every implicit generator
    /// must vanish on the parametrization.
    static SurfacePatch parametrized(std::string label, std::vector<MPoly> components, int degree,
                                     std::vector<MPoly> implicit = {});

    const std::string& label() const { return label_; }
    Kind kind() const { return kind_; }
    bool is_flat() const { return kind_ == Kind::Flat; }
    std::size_t dim() const { return param_.size(); }
    int degree() const { return degree_; }
    const std::vector<MPoly>& parametrization() const { return param_; }
    /// For flats: d - 2 affine forms cutting out the flat, in RREF-canonical form.
    const std::vector<MPoly>& implicit_generators() const { return implicit_; }
    RatVec point_at(const Rational& s, const Rational& t) const;

    const RatVec& flat_point() const { return point_; }
    const RatVec& flat_u() const { return u_; }
    const RatVec& flat_v() const { return v_; }

private:
    std::string label_;
    Kind kind_ = Kind::Flat;
    int degree_ = 1;
    std::vector<MPoly> param_;
    std::vector<MPoly> implicit_;
    RatVec point_, u_, v_;
};

bool surface_contained_in(const SurfacePatch& s, const MPoly& f);

/// Exact test that gamma lies on s. Flats use their affine equations;
/// parametrized surfaces use their implicit generators, which must then cut
/// the surface out exactly.
bool curve_on_surface(const ParamCurve& gamma, const SurfacePatch& s);

/// Common zero set of the generators.
struct Variety {
    std::vector<MPoly> generators;
    int claimed_dim = 3;
    int degree_bound = 1;
    std::string label;

    bool contains(const ParamCurve& gamma) const;
    bool contains(const SurfacePatch& s) const;
};

/// A point on at least two curves; labels sorted.
struct RichPoint {
    AlgebraicPoint coords;
    std::vector<std::string> labels;
    std::size_t multiplicity() const { return labels.size(); }
};

/// Exact membership of an algebraic point on a parametrized curve.
bool curve_passes_through(const ParamCurve& gamma, const AlgebraicPoint& p);

struct CurveIntersection {
    bool identical = false;
    /// Distinct common points in lexicographic order; empty when identical.
    std::vector<AlgebraicPoint> points;
};

CurveIntersection intersect_curves(const ParamCurve& a, const ParamCurve& b);

/// Images coincide; decided by deg(a)·deg(b) + 1 sample points each way.
bool curves_identical(const ParamCurve& a, const ParamCurve& b);

struct FlatMeet {
    enum class Kind { Line, Point, Empty, Coincident };
    Kind kind = Kind::Empty;
    std::optional<ParamCurve> line;
    RatVec point;
};

/// Intersection of two flats (any ambient dimension).
FlatMeet common_line_of_flats(const SurfacePatch& a, const SurfacePatch& b);

struct Factorization {
    /// Primitive factors with multiplicities; the product times a constant
    /// divides the input.
    std::vector<std::pair<MPoly, int>> factors;
    bool complete = false;
};

/// Rational linear factors are always split off, with multiplicity. A
/// leftover quadric is irreducible over Q; it is complete unless its symmetric
/// matrix has rank <= 2 (it splits over an extension). Any leftover of degree
/// >= 3 clears the completeness flag.
Factorization irreducible_components(const MPoly& f);

/// Canonical form of an affine-linear system: RREF of its coefficient rows.
std::vector<MPoly> canonical_linear_system(const std::vector<MPoly>& forms);

}  // namespace ilab
