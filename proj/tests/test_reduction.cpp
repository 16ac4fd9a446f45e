#include <doctest.h>

#include "ilab/arrangements.h"
#include "ilab/linalg.h"
#include "ilab/reduction.h"

#include <set>

using namespace ilab;

namespace {

MPoly var(std::size_t n, std::size_t i) { return MPoly::variable(n, i); }

bool proportional(const MPoly& a, const MPoly& b) { return a.primitive() == b.primitive() || a.primitive() == (-b).primitive(); }

MPoly hyperplane(const RatVec& c) { return MPoly::affine(c); }

// Two flats lie in a common hyperplane iff their affine hull is not all of R^4.
bool share_hyperplane(const SurfacePatch& a, const SurfacePatch& b)
{
    RatVec shift = b.flat_point();
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] -= a.flat_point()[i];
    return rank({a.flat_u(), a.flat_v(), b.flat_u(), b.flat_v(), shift}, 4) < 4;
}

}  // namespace

TEST_CASE("regulus lines reduce to the saddle")
{
    auto reg = gen_regulus_lines(20, 1).curves;
    auto v = min_vanishing_polynomial(reg, 3);
    REQUIRE(v);
    CHECK(v->k == 2);
    CHECK(v->rows == 40 * 3);
    CHECK(v->cols == 10);
    CHECK(proportional(v->poly, var(3, 0) * var(3, 1) - var(3, 2)));
    for (const auto& l : reg) CHECK(curve_contained_in(l, v->poly));
    CHECK_FALSE(min_vanishing_polynomial(reg, 1));
}

TEST_CASE("three generic lines lie in no plane")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto lines = gen_random_lines(3, 3, 10, seed).curves;
        CHECK_FALSE(min_vanishing_polynomial(lines, 1));
        auto q = min_vanishing_polynomial(lines, 2);
        REQUIRE(q);
        CHECK(q->k == 2);
        for (const auto& l : lines) CHECK(curve_contained_in(l, q->poly));
    }
}

TEST_CASE("flats in a coordinate hyperplane reduce to it")
{
    auto flats = gen_flats_in_hyperplane(12, var(4, 3), 4).surfaces;
    auto v = min_vanishing_polynomial(flats, 2);
    REQUIRE(v);
    CHECK(v->k == 1);
    CHECK(proportional(v->poly, var(4, 3)));
    CHECK_THROWS_AS(min_vanishing_polynomial(flats, 0), Error);
}

TEST_CASE("vanishing polynomials of parametrized surfaces")
{
    const MPoly s = var(2, 0), t = var(2, 1);
    auto saddle = SurfacePatch::parametrized("Q", {s, t, s * t}, 2, {var(3, 2) - var(3, 0) * var(3, 1)});
    auto v = min_vanishing_polynomial(std::vector<SurfacePatch>{saddle}, 3);
    REQUIRE(v);
    CHECK(v->k == 2);
    CHECK(proportional(v->poly, var(3, 2) - var(3, 0) * var(3, 1)));
}

TEST_CASE("two bundles of flats cluster into their hyperplanes")
{
    const MPoly h1 = hyperplane({Rational(1), Rational(2), Rational(-1), Rational(0), Rational(3)});
    const MPoly h2 = hyperplane({Rational(-2), Rational(0), Rational(1), Rational(1), Rational(1)});
    auto arr = merge(gen_flats_in_hyperplane(30, h1, 1), gen_flats_in_hyperplane(30, h2, 2), "a", "b");
    auto r = cluster_hypersurfaces(arr.surfaces, 20, 1);
    REQUIRE(r.hypersurfaces.size() == 2);
    CHECK(r.residual.empty());
    std::set<std::string> seen;
    for (const auto& c : r.hypersurfaces) {
        CHECK(c.degree == 1);
        CHECK(c.members.size() == 30);
        CHECK((proportional(c.poly, h1) || proportional(c.poly, h2)));
        const char prefix = c.members.front().front();
        for (const auto& m : c.members) {
            CHECK(m.front() == prefix);
            CHECK(seen.insert(m).second);
        }
        for (const auto& s : arr.surfaces)
            if (std::binary_search(c.members.begin(), c.members.end(), s.label())) CHECK(surface_contained_in(s, c.poly));
    }
    CHECK(to_json(r).dump() == to_json(cluster_hypersurfaces(arr.surfaces, 20, 1)).dump());
}

TEST_CASE("generic flats do not cluster")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto flats = gen_random_flats(15, seed).surfaces;
        bool any_pair = false;
        for (std::size_t i = 0; i < flats.size(); ++i)
            for (std::size_t j = i + 1; j < flats.size(); ++j) any_pair = any_pair || share_hyperplane(flats[i], flats[j]);
        auto r = cluster_hypersurfaces(flats, 2, 1);
        CHECK(r.hypersurfaces.empty() == !any_pair);
        if (!any_pair) CHECK(r.residual.size() == flats.size());
    }
}

TEST_CASE("A above n leaves everything residual")
{
    auto flats = gen_flats_in_hyperplane(5, var(4, 0), 3).surfaces;
    auto r = cluster_hypersurfaces(flats, 6, 1);
    CHECK(r.hypersurfaces.empty());
    CHECK(r.residual.size() == 5);
    CHECK_THROWS_AS(cluster_hypersurfaces(flats, 0, 1), Error);
    CHECK_THROWS_AS(cluster_hypersurfaces(flats, 2, 0), Error);
}

TEST_CASE("clustering fuzz respects its contract")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed);
        const std::size_t n1 = static_cast<std::size_t>(rng.uniform(0, 20));
        const std::size_t n2 = static_cast<std::size_t>(rng.uniform(0, 20));
        const std::size_t n3 = static_cast<std::size_t>(rng.uniform(1, 20));
        RatVec c;
        for (int k = 0; k < 5; ++k) c.push_back(Rational(rng.uniform(-3, 3)));
        c[4] = 1;
        auto arr = merge(merge(gen_flats_in_hyperplane(n1, var(4, 0), seed), gen_flats_in_hyperplane(n2, hyperplane(c), seed + 1), "a", "b"),
                         gen_random_flats(n3, seed + 2), "", "g");
        const std::size_t n = arr.surfaces.size();
        const std::size_t A = static_cast<std::size_t>(rng.uniform(1, 12));
        auto r = cluster_hypersurfaces(arr.surfaces, A, 1);
        CHECK(r.hypersurfaces.size() <= (n + A - 1) / A);
        std::set<std::string> seen(r.residual.begin(), r.residual.end());
        for (const auto& h : r.hypersurfaces) {
            CHECK(h.members.size() >= A);
            for (const auto& m : h.members) CHECK(seen.insert(m).second);
            for (const auto& s : arr.surfaces)
                if (std::binary_search(h.members.begin(), h.members.end(), s.label())) CHECK(surface_contained_in(s, h.poly));
        }
        CHECK(seen.size() == n);
    }
}

TEST_CASE("curves cluster into a surface")
{
    auto arr = merge(gen_regulus_lines(6, 1), gen_random_lines(3, 4, 10, 9), "q", "r");
    auto r = cluster_hypersurfaces(arr.curves, 10, 2);
    REQUIRE(r.hypersurfaces.size() >= 1);
    CHECK(proportional(r.hypersurfaces.front().poly, var(3, 2) - var(3, 0) * var(3, 1)));
}

TEST_CASE("degree audit of rich curves")
{
    auto flat = SurfacePatch::flat("F", {Rational(0), Rational(0), Rational(1)}, {Rational(1), Rational(0), Rational(0)},
                                   {Rational(0), Rational(1), Rational(0)});
    auto lines = gen_lines_in_flat(3, 12, flat, 2).curves;
    auto a = rich_curve_degree_audit(flat, lines, Rational(2));
    CHECK(a.p2 == 66);
    CHECK(a.hypothesis);
    CHECK(a.degree_ok);
    CHECK(a.status() == "ok");

    const MPoly s = var(2, 0), t = var(2, 1);
    auto saddle = SurfacePatch::parametrized("Q", {s, t, s * t}, 2, {var(3, 2) - var(3, 0) * var(3, 1)});
    auto reg = gen_regulus_lines(8, 4).curves;
    auto b = rich_curve_degree_audit(saddle, reg, Rational(1));
    CHECK(b.p2 == 64);
    CHECK(b.surface_degree == 2);
    CHECK(b.status() == "ok");

    auto few = std::vector<ParamCurve>(lines.begin(), lines.begin() + 3);
    auto c = rich_curve_degree_audit(flat, few, Rational(5));
    CHECK_FALSE(c.hypothesis);
    CHECK(c.status() == "not applicable");

    CHECK_THROWS_AS(rich_curve_degree_audit(flat, gen_random_lines(3, 2, 5, 1).curves, Rational(1)), Error);
    CHECK(reduction_degcap(60, 20) == 1);
    CHECK(reduction_degcap(400, 20) == 10);
    CHECK(clustering_degcap(2) == 400);
}
