#include "ilab/geometry.h"

#include "ilab/linalg.h"

#include <algorithm>
#include <random>
#include <set>

namespace ilab {

ParamCurve::ParamCurve(std::string label, std::vector<UPoly> components)
    : label_(std::move(label)), components_(std::move(components))
{
    if (components_.empty()) throw DimensionMismatch("curve needs at least one coordinate");
    if (degree() < 1) throw Error("curve '" + label_ + "' is constant");
}

ParamCurve ParamCurve::line(std::string label, const RatVec& point, const RatVec& direction)
{
    if (point.size() != direction.size()) throw DimensionMismatch("line point and direction differ in length");
    std::vector<UPoly> comps;
    for (std::size_t i = 0; i < point.size(); ++i) comps.push_back(UPoly::linear(point[i], direction[i]));
    return ParamCurve(std::move(label), std::move(comps));
}

ParamCurve canonical_line(std::string label, const RatVec& point, const RatVec& direction)
{
    std::size_t lead = 0;
    while (lead < direction.size() && direction[lead] == 0) ++lead;
    if (lead == direction.size()) throw Error("line with zero direction");
    RatVec dir = direction;
    const Rational scale = 1 / direction[lead];
    for (auto& x : dir) x *= scale;
    const Rational shift = point[lead];
    RatVec base = point;
    for (std::size_t i = 0; i < base.size(); ++i) base[i] -= shift * dir[i];
    return ParamCurve::line(std::move(label), base, dir);
}

int ParamCurve::degree() const
{
    int d = -1;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
}

RatVec ParamCurve::point_at(const Rational& t) const
{
    RatVec p;
    p.reserve(components_.size());
    for (const auto& c : components_) p.push_back(c.eval(t));
    return p;
}

RatVec ParamCurve::direction() const
{
    RatVec d;
    for (const auto& c : components_) d.push_back(c.coeff(1));
    return d;
}

UPoly compose_with_curve(const MPoly& f, const ParamCurve& gamma)
{
    if (f.nvars() != gamma.dim()) throw DimensionMismatch("polynomial and curve live in different dimensions");
    return f.compose(gamma.components());
}

bool curve_contained_in(const ParamCurve& gamma, const MPoly& f) { return compose_with_curve(f, gamma).is_zero(); }

std::vector<MPoly> canonical_linear_system(const std::vector<MPoly>& forms)
{
    if (forms.empty()) return {};
    const std::size_t n = forms.front().nvars();
    RatMatrix rows;
    for (const auto& f : forms) {
        if (f.degree() > 1) throw Error("canonical_linear_system: form is not affine-linear");
        RatVec r(n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            Exponent e(n, 0);
            e[i] = 1;
            r[i] = f.coeff(e);
        }
        r[n] = f.coeff(Exponent(n, 0));
        rows.push_back(std::move(r));
    }
    const std::size_t nonzero = rref(rows, n + 1).size();
    std::vector<MPoly> out;
    for (std::size_t k = 0; k < nonzero; ++k) {
        RatVec c(n + 1);
        c[0] = rows[k][n];
        for (std::size_t i = 0; i < n; ++i) c[i + 1] = rows[k][i];
        out.push_back(MPoly::affine(c));
    }
    return out;
}

SurfacePatch SurfacePatch::flat(std::string label, const RatVec& point, const RatVec& u, const RatVec& v)
{
    const std::size_t d = point.size();
    if (u.size() != d || v.size() != d) throw DimensionMismatch("flat vectors differ in length");
    if (rank({u, v}, d) != 2) throw Error("flat '" + label + "' has dependent directions");
    SurfacePatch s;
    s.label_ = std::move(label);
    s.kind_ = Kind::Flat;
    s.degree_ = 1;
    s.point_ = point;
    s.u_ = u;
    s.v_ = v;
    for (std::size_t i = 0; i < d; ++i) s.param_.push_back(MPoly::affine({point[i], u[i], v[i]}));
    std::vector<MPoly> forms;
    for (const auto& normal : nullspace({u, v}, d)) {
        RatVec c(d + 1);
        c[0] = -dot(normal, point);
        for (std::size_t i = 0; i < d; ++i) c[i + 1] = normal[i];
        forms.push_back(MPoly::affine(c));
    }
    s.implicit_ = canonical_linear_system(forms);
    return s;
}

SurfacePatch SurfacePatch::parametrized(std::string label, std::vector<MPoly> components, int degree,
                                        std::vector<MPoly> implicit)
{
    if (components.empty()) throw DimensionMismatch("surface needs at least one coordinate");
    for (const auto& c : components)
        if (c.nvars() != 2) throw DimensionMismatch("surface parametrization must use two parameters");
    SurfacePatch s;
    s.label_ = std::move(label);
    s.kind_ = Kind::Parametrized;
    s.degree_ = degree;
    s.param_ = std::move(components);
    for (const auto& g : implicit) {
        if (g.nvars() != s.param_.size()) throw DimensionMismatch("implicit generator dimension");
        if (!g.compose(s.param_).is_zero())
            throw Error("implicit generator does not vanish on surface '" + s.label_ + "'");
    }
    s.implicit_ = std::move(implicit);
    return s;
}

RatVec SurfacePatch::point_at(const Rational& s, const Rational& t) const
{
    RatVec p;
    for (const auto& c : param_) p.push_back(c.eval({s, t}));
    return p;
}

bool surface_contained_in(const SurfacePatch& s, const MPoly& f)
{
    if (f.nvars() != s.dim()) throw DimensionMismatch("polynomial and surface live in different dimensions");
    return f.compose(s.parametrization()).is_zero();
}

bool curve_on_surface(const ParamCurve& gamma, const SurfacePatch& s)
{
    if (gamma.dim() != s.dim()) throw DimensionMismatch("curve and surface live in different dimensions");
    if (s.implicit_generators().empty())
        throw Error("surface '" + s.label() + "' has no implicit generators for curve containment");
    for (const auto& g : s.implicit_generators())
        if (!curve_contained_in(gamma, g)) return false;
    return true;
}

bool Variety::contains(const ParamCurve& gamma) const
{
    for (const auto& g : generators)
        if (!curve_contained_in(gamma, g)) return false;
    return true;
}

bool Variety::contains(const SurfacePatch& s) const
{
    for (const auto& g : generators)
        if (!surface_contained_in(s, g)) return false;
    return true;
}

namespace {

AlgebraicPoint curve_point(const ParamCurve& gamma, const AlgebraicNumber& t)
{
    AlgebraicPoint p;
    p.reserve(gamma.dim());
    for (const auto& c : gamma.components()) p.push_back(evaluate(c, t));
    return p;
}

AlgebraicPoint rational_point(const RatVec& x)
{
    return AlgebraicPoint(x.begin(), x.end());
}

// Polynomial in t whose roots include every t with c(t) = value.
UPoly preimage_polynomial(const UPoly& c, const AlgebraicNumber& value)
{
    if (value.is_rational()) return c - UPoly::constant(value.rational_value());
    // res_y(m(y), y - c(t)) over the ring Q[y, t].
    MPoly m = MPoly::from_upoly(value.minpoly(), 2, 0);
    MPoly shifted = MPoly::variable(2, 0) - MPoly::from_upoly(c, 2, 1);
    return resultant(m, shifted, 0).to_upoly(1);
}

}  // namespace

bool curve_passes_through(const ParamCurve& gamma, const AlgebraicPoint& p)
{
    if (p.size() != gamma.dim()) throw DimensionMismatch("point and curve differ in dimension");
    std::size_t pivot = gamma.dim();
    for (std::size_t i = 0; i < gamma.dim(); ++i) {
        const UPoly& c = gamma.components()[i];
        if (c.degree() <= 0) {
            if (p[i] != AlgebraicNumber(c.coeff(0))) return false;
        } else if (pivot == gamma.dim() || c.degree() < gamma.components()[pivot].degree()) {
            pivot = i;
        }
    }
    UPoly pre = preimage_polynomial(gamma.components()[pivot], p[pivot]);
    if (pre.is_zero()) return false;
    const Rational width(Integer(1), Integer(1) << 40);
    std::vector<AlgebraicNumber> target;
    for (const auto& x : p) target.push_back(x.is_rational() ? x : x.refined_to(width));
    for (const auto& root : isolate_roots(pre)) {
        const AlgebraicNumber t = root.is_rational() ? root : root.refined_to(width);
        bool all = true;
        for (std::size_t i = 0; i < gamma.dim() && all; ++i) {
            const UPoly& c = gamma.components()[i];
            if (c.degree() <= 0) continue;
            // Disjoint enclosures settle the coordinate without exact evaluation.
            auto [lo, hi] = t.is_rational() ? std::pair{c.eval(t.rational_value()), c.eval(t.rational_value())}
                                            : interval_eval(c, t.lo(), t.hi());
            const Rational tlo = target[i].is_rational() ? target[i].rational_value() : target[i].lo();
            const Rational thi = target[i].is_rational() ? target[i].rational_value() : target[i].hi();
            if (hi < tlo || thi < lo) {
                all = false;
                break;
            }
            all = evaluates_to(c, t, p[i]);
        }
        if (all) return true;
    }
    return false;
}

bool curves_identical(const ParamCurve& a, const ParamCurve& b)
{
    if (a.dim() != b.dim()) return false;
    const int samples = a.degree() * b.degree() + 1;
    for (int k = 0; k < samples; ++k) {
        if (!curve_passes_through(b, rational_point(a.point_at(k)))) return false;
        if (!curve_passes_through(a, rational_point(b.point_at(k)))) return false;
    }
    return true;
}

namespace {

CurveIntersection intersect_lines(const ParamCurve& a, const ParamCurve& b)
{
    const std::size_t d = a.dim();
    const RatVec pa = a.base_point(), ua = a.direction(), pb = b.base_point(), ub = b.direction();
    RatMatrix m(d, RatVec(2));
    RatVec rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
        m[i][0] = ua[i];
        m[i][1] = -ub[i];
        rhs[i] = pb[i] - pa[i];
    }
    auto sol = solve(m, rhs, 2);
    CurveIntersection out;
    if (!sol) return out;
    if (rank(m, 2) < 2) {
        out.identical = true;
        return out;
    }
    out.points.push_back(rational_point(a.point_at((*sol)[0])));
    return out;
}

// gcd of all available univariate eliminants for var `keep`; zero when none
// of them is nonzero. Sets `empty` when some equation is a nonzero constant.
UPoly eliminant(const std::vector<MPoly>& eqs, std::size_t keep, bool& empty)
{
    const std::size_t elim = 1 - keep;
    std::vector<UPoly> found;
    std::vector<const MPoly*> mixed;
    for (const auto& f : eqs) {
        if (f.is_zero()) continue;
        if (!f.depends_on(elim)) {
            if (f.degree() == 0) {
                empty = true;
                return UPoly::constant(1);
            }
            found.push_back(f.to_upoly(keep));
        } else {
            mixed.push_back(&f);
        }
    }
    for (std::size_t i = 0; i < mixed.size(); ++i)
        for (std::size_t j = i + 1; j < mixed.size(); ++j) {
            MPoly r = resultant(*mixed[i], *mixed[j], elim);
            if (!r.is_zero()) found.push_back(r.to_upoly(keep));
        }
    if (found.empty() && !mixed.empty()) {
        // Two generic combinations of the mixed equations.
        MPoly g1(2), g2(2);
        for (std::size_t i = 0; i < mixed.size(); ++i) {
            g1 += *mixed[i] * Rational(static_cast<long>(i + 1));
            g2 += *mixed[i] * Rational(static_cast<long>((i + 1) * (i + 1) + 3));
        }
        if (g1.depends_on(elim) && g2.depends_on(elim)) {
            MPoly r = resultant(g1, g2, elim);
            if (!r.is_zero()) found.push_back(r.to_upoly(keep));
        }
    }
    if (found.empty()) return {};
    UPoly g = found.front();
    for (std::size_t i = 1; i < found.size(); ++i) g = gcd(g, found[i]);
    return g;
}

}  // namespace

CurveIntersection intersect_curves(const ParamCurve& a, const ParamCurve& b)
{
    if (a.dim() != b.dim()) throw DimensionMismatch("intersecting curves of different dimensions");
    if (a.is_line() && b.is_line()) return intersect_lines(a, b);

    std::vector<MPoly> eqs;
    for (std::size_t i = 0; i < a.dim(); ++i)
        eqs.push_back(MPoly::from_upoly(a.components()[i], 2, 0) - MPoly::from_upoly(b.components()[i], 2, 1));
    bool empty = false;
    UPoly es = eliminant(eqs, 0, empty);
    if (empty) return {};
    UPoly et = eliminant(eqs, 1, empty);
    if (empty) return {};

    CurveIntersection out;
    if (es.is_zero() || et.is_zero()) {
        if (!curves_identical(a, b)) throw Error("intersect_curves: degenerate elimination on distinct curves");
        out.identical = true;
        return out;
    }
    if (es.degree() < 1 || et.degree() < 1) return out;
    std::vector<AlgebraicPoint> pts_a, pts_b;
    for (const auto& s : isolate_roots(es)) pts_a.push_back(curve_point(a, s));
    for (const auto& t : isolate_roots(et)) pts_b.push_back(curve_point(b, t));
    for (const auto& p : pts_a) {
        for (const auto& r : pts_b) {
            if (compare(p, r) == 0) {
                out.points.push_back(p);
                break;
            }
        }
    }
    std::sort(out.points.begin(), out.points.end(), AlgebraicPointLess{});
    out.points.erase(std::unique(out.points.begin(), out.points.end(),
                                 [](const auto& x, const auto& y) { return compare(x, y) == 0; }),
                     out.points.end());
    return out;
}

FlatMeet common_line_of_flats(const SurfacePatch& a, const SurfacePatch& b)
{
    if (!a.is_flat() || !b.is_flat()) throw Error("common_line_of_flats: both surfaces must be flats");
    if (a.dim() != b.dim()) throw DimensionMismatch("flats of different dimensions");
    const std::size_t d = a.dim();
    RatMatrix m(d, RatVec(4));
    RatVec rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
        m[i] = {a.flat_u()[i], a.flat_v()[i], -b.flat_u()[i], -b.flat_v()[i]};
        rhs[i] = b.flat_point()[i] - a.flat_point()[i];
    }
    FlatMeet out;
    auto sol = solve(m, rhs, 4);
    if (!sol) return out;
    auto point_of = [&](const RatVec& coef, bool affine) {
        RatVec p(d);
        for (std::size_t i = 0; i < d; ++i)
            p[i] = (affine ? a.flat_point()[i] : Rational(0)) + coef[0] * a.flat_u()[i] + coef[1] * a.flat_v()[i];
        return p;
    };
    const RatVec base = point_of(*sol, true);
    auto kernel = nullspace(m, 4);
    switch (kernel.size()) {
    case 0:
        out.kind = FlatMeet::Kind::Point;
        out.point = base;
        break;
    case 1:
        out.kind = FlatMeet::Kind::Line;
        out.line = canonical_line(a.label() + "&" + b.label(), base, point_of(kernel[0], false));
        out.point = out.line->base_point();
        break;
    default:
        out.kind = FlatMeet::Kind::Coincident;
        out.point = base;
        break;
    }
    return out;
}

namespace {

std::vector<Rational> rational_roots(const UPoly& g)
{
    std::vector<Rational> out;
    for (const auto& r : isolate_roots(g))
        if (r.is_rational()) out.push_back(r.rational_value());
    return out;
}

// Affine form through n points in Q^n, or nullopt when they do not pin one down.
std::optional<MPoly> hyperplane_through(const std::vector<RatVec>& pts)
{
    const std::size_t n = pts.front().size();
    RatMatrix m;
    for (const auto& p : pts) {
        RatVec row{Rational(1)};
        row.insert(row.end(), p.begin(), p.end());
        m.push_back(std::move(row));
    }
    auto ker = nullspace(m, n + 1);
    if (ker.size() != 1) return std::nullopt;
    MPoly l = MPoly::affine(ker[0]);
    if (l.degree() < 1) return std::nullopt;
    return l.primitive();
}

// Every hyperplane component of Z(f) meets a generic rational line in a
// rational point. Lines share one direction so a hyperplane is determined by
// one root per line; an extra line filters the combinations.
std::vector<MPoly> linear_factors(const MPoly& f)
{
    const std::size_t n = f.nvars();
    std::vector<MPoly> found;
    auto add = [&](const MPoly& l) {
        if (std::find(found.begin(), found.end(), l) == found.end() && MPoly::divide_exact(f, l)) found.push_back(l);
    };
    if (f.degree() == 1) return {f.primitive()};
    if (n == 1) {
        for (const auto& r : rational_roots(f.to_upoly(0))) add(MPoly::affine({-r, 1}).primitive());
        return found;
    }
    MPoly top(n);
    for (const auto& [e, c] : f.terms())
        if (total_degree(e) == f.degree()) top.add_term(e, c);
    std::mt19937_64 rng(0x1ab5eedULL);
    std::uniform_int_distribution<int> coord(-9, 9);
    for (int round = 0; round < 2; ++round) {
        // A direction where the top-degree part is nonzero is transverse to
        // every hyperplane factor.
        RatVec dir(n);
        do {
            for (auto& x : dir) x = coord(rng);
        } while (top.eval(dir) == 0);
        std::vector<RatVec> bases(n + 1, RatVec(n));
        for (auto& b : bases)
            for (auto& x : b) x = coord(rng);
        std::vector<std::vector<Rational>> roots;
        bool usable = true;
        for (const auto& b : bases) {
            std::vector<UPoly> line;
            for (std::size_t i = 0; i < n; ++i) line.push_back(UPoly::linear(b[i], dir[i]));
            UPoly g = f.compose(line);
            if (g.is_zero()) {
                usable = false;
                break;
            }
            roots.push_back(rational_roots(g));
        }
        if (!usable) continue;
        std::vector<std::size_t> pick(n, 0);
        bool any = true;
        for (std::size_t k = 0; k < n; ++k) any = any && !roots[k].empty();
        while (any) {
            std::vector<RatVec> pts;
            for (std::size_t k = 0; k < n; ++k) {
                RatVec p = bases[k];
                for (std::size_t i = 0; i < n; ++i) p[i] += roots[k][pick[k]] * dir[i];
                pts.push_back(std::move(p));
            }
            if (auto l = hyperplane_through(pts)) {
                // The extra line must hit the candidate at one of its roots.
                std::vector<UPoly> line;
                for (std::size_t i = 0; i < n; ++i) line.push_back(UPoly::linear(bases[n][i], dir[i]));
                UPoly h = l->compose(line);
                if (h.degree() == 1) {
                    Rational t = -h.coeff(0) / h.coeff(1);
                    if (std::find(roots[n].begin(), roots[n].end(), t) != roots[n].end()) add(*l);
                }
            }
            std::size_t k = 0;
            while (k < n && ++pick[k] == roots[k].size()) pick[k++] = 0;
            if (k == n) break;
        }
    }
    return found;
}

bool quadric_splits_over_reals(const MPoly& q)
{
    const std::size_t n = q.nvars();
    RatMatrix m(n + 1, RatVec(n + 1));
    for (const auto& [e, c] : q.terms()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            for (int k = 0; k < e[i]; ++k) idx.push_back(i + 1);
        while (idx.size() < 2) idx.push_back(0);
        if (idx[0] == idx[1]) {
            m[idx[0]][idx[0]] += c;
        } else {
            m[idx[0]][idx[1]] += c / 2;
            m[idx[1]][idx[0]] += c / 2;
        }
    }
    return rank(m, n + 1) <= 2;
}

}  // namespace

Factorization irreducible_components(const MPoly& f)
{
    if (f.is_zero()) throw Error("irreducible_components: zero polynomial");
    Factorization out;
    MPoly rest = f.primitive();
    if (rest.degree() <= 0) {
        out.complete = true;
        return out;
    }
    for (const auto& l : linear_factors(rest)) {
        int mult = 0;
        while (auto quot = MPoly::divide_exact(rest, l)) {
            rest = std::move(*quot);
            ++mult;
        }
        if (mult > 0) out.factors.emplace_back(l, mult);
    }
    rest = rest.primitive();
    switch (rest.degree()) {
    case 0:
        out.complete = true;
        break;
    case 1:
        out.factors.emplace_back(rest, 1);
        out.complete = true;
        break;
    case 2:
        out.factors.emplace_back(rest, 1);
        out.complete = !quadric_splits_over_reals(rest);
        break;
    default:
        out.factors.emplace_back(rest, 1);
        out.complete = false;
        break;
    }
    return out;
}

}  // namespace ilab
