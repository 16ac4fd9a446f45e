#include "ilab/reduction.h"

#include "ilab/incidence.h"
#include "ilab/linalg.h"
#include "ilab/parallel.h"

#include <algorithm>

namespace ilab {

namespace {

int param_degree(const SurfacePatch& s)
{
    int d = 0;
    for (const auto& c : s.parametrization()) d = std::max(d, c.degree());
    return d;
}

// Enough samples that a degree-k polynomial vanishing on them vanishes on the object.
std::vector<RatVec> samples_for(const ParamCurve& c, int k)
{
    std::vector<RatVec> out;
    const int m = k * c.degree();
    for (int t = 0; t <= m; ++t) out.push_back(c.point_at(Rational(t)));
    return out;
}

std::vector<RatVec> samples_for(const SurfacePatch& s, int k)
{
    std::vector<RatVec> out;
    const int m = k * param_degree(s);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= m; ++b) out.push_back(s.point_at(Rational(a), Rational(b)));
    return out;
}

std::vector<RatVec> samples_for(const SampledObject& o, int k) { return o.samples(k); }

bool contained(const ParamCurve& c, const MPoly& f) { return curve_contained_in(c, f); }
bool contained(const SurfacePatch& s, const MPoly& f) { return surface_contained_in(s, f); }
bool contained(const SampledObject& o, const MPoly& f)
{
    for (const auto& x : o.samples(std::max(1, f.degree())))
        if (f.sign_at(x) != 0) return false;
    return true;
}

std::size_t dim_of(const ParamCurve& c) { return c.dim(); }
std::size_t dim_of(const SurfacePatch& s) { return s.dim(); }
std::size_t dim_of(const SampledObject& o) { return o.dim; }
const std::string& label_of(const ParamCurve& c) { return c.label(); }
const std::string& label_of(const SurfacePatch& s) { return s.label(); }
const std::string& label_of(const SampledObject& o) { return o.label; }

template <class T>
std::size_t common_dim(const std::vector<T>& objs, const char* what)
{
    if (objs.empty()) throw Error(std::string(what) + ": no objects");
    const std::size_t d = dim_of(objs.front());
    for (const auto& o : objs)
        if (dim_of(o) != d) throw DimensionMismatch(std::string(what) + ": objects of mixed dimension");
    return d;
}

RatMatrix evaluation_rows(const std::vector<RatVec>& samples, const std::vector<Exponent>& monos)
{
    RatMatrix rows;
    rows.reserve(samples.size());
    for (const auto& x : samples) rows.push_back(monomial_values(monos, x));
    return rows;
}

MPoly from_coefficients(const std::vector<Exponent>& monos, const RatVec& coef, std::size_t dim)
{
    MPoly f(dim);
    for (std::size_t j = 0; j < monos.size(); ++j)
        if (coef[j] != 0) f.add_term(monos[j], coef[j]);
    return f.primitive();
}

template <class T>
std::optional<VanishingPolynomial> min_vanishing_impl(const std::vector<T>& objs, int kmax, unsigned threads)
{
    if (kmax < 1) throw Error("min_vanishing_polynomial: kmax must be at least 1");
    const std::size_t dim = common_dim(objs, "min_vanishing_polynomial");
    for (int k = 1; k <= kmax; ++k) {
        const auto monos = monomials_up_to(dim, k);
        std::vector<RatMatrix> blocks(objs.size());
        parallel_for(objs.size(), threads, [&](std::size_t i) { blocks[i] = evaluation_rows(samples_for(objs[i], k), monos); });
        RatMatrix m;
        for (auto& b : blocks) std::move(b.begin(), b.end(), std::back_inserter(m));
        const std::size_t rows = m.size();
        auto kernel = nullspace(std::move(m), monos.size());
        if (kernel.empty()) continue;
        VanishingPolynomial v{k, from_coefficients(monos, kernel.front(), dim), rows, monos.size()};
        for (const auto& o : objs)
            if (!contained(o, v.poly)) throw Error("min_vanishing_polynomial: sampled kernel does not contain an object");
        return v;
    }
    return std::nullopt;
}

template <class T>
ClusterResult cluster_impl(const std::vector<T>& objs, std::size_t A, int degcap)
{
    if (A < 1) throw Error("cluster_hypersurfaces: A must be at least 1");
    if (degcap < 1) throw Error("cluster_hypersurfaces: degcap must be at least 1");
    ClusterResult r;
    r.A_used = A;
    r.degcap = degcap;
    if (objs.empty()) return r;
    const std::size_t dim = common_dim(objs, "cluster_hypersurfaces");

    std::vector<std::size_t> remaining(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) remaining[i] = i;
    std::sort(remaining.begin(), remaining.end(), [&](auto a, auto b) { return label_of(objs[a]) < label_of(objs[b]); });

    // rows[i][k - 1]: sample rows of object i at degree k.
    std::vector<std::vector<RatMatrix>> rows(objs.size());
    std::vector<std::vector<RatVec>> full(static_cast<std::size_t>(degcap));
    for (int k = 1; k <= degcap; ++k) {
        const auto monos = monomials_up_to(dim, k);
        for (std::size_t i = 0; i < objs.size(); ++i) rows[i].push_back(evaluation_rows(samples_for(objs[i], k), monos));
        for (std::size_t j = 0; j < monos.size(); ++j) {
            RatVec e(monos.size());
            e[j] = 1;
            full[static_cast<std::size_t>(k - 1)].push_back(std::move(e));
        }
    }
    auto restricted = [&](const std::vector<std::vector<RatVec>>& basis, std::size_t i) {
        std::vector<std::vector<RatVec>> out(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (!basis[k].empty()) out[k] = restrict_kernel(basis[k], rows[i][k]);
        return out;
    };
    auto any_left = [](const std::vector<std::vector<RatVec>>& basis) {
        return std::any_of(basis.begin(), basis.end(), [](const auto& b) { return !b.empty(); });
    };

    while (true) {
        ++r.iterations;
        bool accepted = false;
        for (std::size_t seed : remaining) {
            auto basis = restricted(full, seed);
            if (!any_left(basis)) continue;
            std::vector<std::size_t> members{seed};
            std::size_t left = remaining.size() - 1;
            for (std::size_t other : remaining) {
                if (other == seed) continue;
                if (members.size() + left < A) break;
                --left;
                auto next = restricted(basis, other);
                if (!any_left(next)) continue;
                basis = std::move(next);
                members.push_back(other);
            }
            if (members.size() < A) continue;
            std::vector<T> chosen;
            for (auto i : members) chosen.push_back(objs[i]);
            auto v = min_vanishing_impl(chosen, degcap, 1);
            if (!v) throw Error("cluster_hypersurfaces: grown cluster lost its vanishing polynomial");
            Cluster c{v->poly, v->k, {}};
            for (auto i : members) c.members.push_back(label_of(objs[i]));
            std::sort(c.members.begin(), c.members.end());
            r.hypersurfaces.push_back(std::move(c));
            std::erase_if(remaining, [&](std::size_t i) { return std::find(members.begin(), members.end(), i) != members.end(); });
            accepted = true;
            break;
        }
        if (!accepted) break;
    }
    for (auto i : remaining) r.residual.push_back(label_of(objs[i]));
    return r;
}

}  // namespace

std::optional<VanishingPolynomial> min_vanishing_polynomial(const std::vector<ParamCurve>& curves, int kmax,
                                                            unsigned threads)
{
    return min_vanishing_impl(curves, kmax, threads);
}

std::optional<VanishingPolynomial> min_vanishing_polynomial(const std::vector<SurfacePatch>& surfaces, int kmax,
                                                            unsigned threads)
{
    return min_vanishing_impl(surfaces, kmax, threads);
}

ClusterResult cluster_hypersurfaces(const std::vector<SurfacePatch>& surfaces, std::size_t A, int degcap)
{
    return cluster_impl(surfaces, A, degcap);
}

ClusterResult cluster_hypersurfaces(const std::vector<ParamCurve>& curves, std::size_t A, int degcap)
{
    return cluster_impl(curves, A, degcap);
}

std::optional<VanishingPolynomial> min_vanishing_polynomial(const std::vector<SampledObject>& objects, int kmax,
                                                            unsigned threads)
{
    return min_vanishing_impl(objects, kmax, threads);
}

ClusterResult cluster_hypersurfaces(const std::vector<SampledObject>& objects, std::size_t A, int degcap)
{
    return cluster_impl(objects, A, degcap);
}

int reduction_degcap(std::size_t n, std::size_t A)
{
    if (A < 1) throw Error("reduction_degcap: A must be at least 1");
    return std::max(1, static_cast<int>(n / (2 * A)));
}

int clustering_degcap(int D) { return 100 * D * D; }

std::string DegreeAudit::status() const
{
    if (!hypothesis) return "not applicable";
    return degree_ok ? "ok" : "violation";
}

DegreeAudit rich_curve_degree_audit(const SurfacePatch& s, const std::vector<ParamCurve>& curves, const Rational& c1,
                                    unsigned threads)
{
    for (const auto& c : curves)
        if (!curve_on_surface(c, s))
            throw Error("rich_curve_degree_audit: curve '" + c.label() + "' is not on '" + s.label() + "'");
    DegreeAudit a;
    a.curves = curves.size();
    a.p2 = two_rich_points(curves, threads).p2();
    for (const auto& c : curves) a.D = std::max(a.D, c.degree());
    a.surface_degree = s.degree();
    a.hypothesis = Rational(static_cast<long>(a.p2)) >= c1 * static_cast<long>(a.curves);
    a.degree_ok = a.surface_degree <= clustering_degcap(a.D);
    return a;
}

Json to_json(const VanishingPolynomial& v)
{
    Json j;
    j["k"] = v.k;
    j["poly"] = to_json(v.poly);
    j["rows"] = v.rows;
    j["cols"] = v.cols;
    return j;
}

Json to_json(const ClusterResult& r)
{
    Json j;
    Json hs = Json::array();
    for (const auto& c : r.hypersurfaces) {
        Json h;
        h["poly"] = to_json(c.poly);
        h["degree"] = c.degree;
        h["members"] = c.members;
        hs.push_back(std::move(h));
    }
    j["hypersurfaces"] = std::move(hs);
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    j["A_used"] = r.A_used;
    j["degcap"] = r.degcap;
    return j;
}

Json to_json(const DegreeAudit& a)
{
    Json j;
    j["curves"] = a.curves;
    j["p2"] = a.p2;
    j["D"] = a.D;
    j["surface_degree"] = a.surface_degree;
    j["hypothesis"] = a.hypothesis;
    j["degree_ok"] = a.degree_ok;
    j["status"] = a.status();
    return j;
}

}  // namespace ilab
