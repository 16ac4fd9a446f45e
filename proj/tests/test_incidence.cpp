#include <doctest.h>

#include "ilab/arrangements.h"
#include "ilab/incidence.h"
#include "oracles.h"

#include <set>

using namespace ilab;
using namespace ilab::oracle;

namespace {

RatVec rv(std::initializer_list<long> c)
{
    RatVec v;
    for (long x : c) v.emplace_back(x);
    return v;
}

void check_matches(const IncidenceReport& r, const Oracle& oracle)
{
    REQUIRE(r.p2() == oracle.size());
    for (const auto& [p, labels] : oracle) {
        bool found = false;
        for (const auto& rp : r.rich_points) {
            bool same = true;
            for (std::size_t i = 0; i < p.size() && same; ++i) same = p[i] == rp.coords[i];
            if (!same) continue;
            found = true;
            CHECK(std::vector<std::string>(labels.begin(), labels.end()) == rp.labels);
        }
        CHECK(found);
    }
    for (std::size_t i = 1; i < r.rich_points.size(); ++i)
        CHECK(compare(r.rich_points[i - 1].coords, r.rich_points[i].coords) < 0);
}

}  // namespace

TEST_CASE("random lines match the independent oracle")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        // Small coordinates force many coincidences in the plane.
        auto a = gen_random_lines(2, 25, 3, seed);
        auto r = two_rich_points(a.curves);
        check_matches(r, line_oracle(a.curves));
        CHECK(r.pair_tests == 25 * 24 / 2);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto a = merge(gen_grid_lines(3), gen_random_lines(3, 15, 2, seed), "g", "r");
        std::vector<ParamCurve> distinct;
        for (const auto& c : a.curves)
            if (std::none_of(distinct.begin(), distinct.end(), [&](const auto& d) { return curves_identical(c, d); }))
                distinct.push_back(c);
        check_matches(two_rich_points(distinct), line_oracle(distinct));
    }
}

TEST_CASE("conics match the brute-force oracle")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto a = gen_random_conics(2, 8, 4, seed);
        auto r = two_rich_points(a.curves);
        check_matches(r, pair_oracle(a.curves));
        CHECK(revalidate(r, a.curves));
        CHECK(r.p2() <= 4 * 8 * 7 / 2);
    }
}

TEST_CASE("grid lines have k^3 rich points")
{
    for (std::size_t k = 2; k <= 6; ++k) {
        auto r = two_rich_points(gen_grid_lines(k).curves);
        CHECK(r.p2() == k * k * k);
        CHECK(r.counts_by_multiplicity.at(3) == k * k * k);
        CHECK(r.counts_by_multiplicity.count(4) == 0);
    }
}

TEST_CASE("regulus and generic examples")
{
    auto reg = gen_regulus_lines(20, 1);
    auto r = two_rich_points(reg.curves);
    CHECK(r.p2() == 400);
    CHECK(r.counts_by_multiplicity.size() == 1);
    CHECK(curves_in_variety(reg.curves, MPoly::variable(3, 2) - MPoly::variable(3, 0) * MPoly::variable(3, 1)).size() ==
          40);

    CHECK(two_rich_points(gen_random_lines(4, 50, 100, 3).curves).p2() == 0);
    CHECK(curves_in_variety(gen_random_lines(3, 20, 50, 3).curves,
                            MPoly::variable(3, 2) - MPoly::variable(3, 0) * MPoly::variable(3, 1))
              .empty());
}

TEST_CASE("concurrent lines give one point")
{
    std::vector<ParamCurve> lines = {ParamCurve::line("a", rv({0, 0}), rv({1, 0})),
                                     ParamCurve::line("b", rv({0, 0}), rv({0, 1})),
                                     ParamCurve::line("c", rv({0, 0}), rv({1, 1}))};
    auto r = two_rich_points(lines);
    REQUIRE(r.p2() == 1);
    CHECK(r.rich_points[0].multiplicity() == 3);
    CHECK(r.counts_by_multiplicity.at(2) == 1);
    CHECK(r.counts_by_multiplicity.at(3) == 1);

    lines.push_back(ParamCurve::line("d", rv({1, 1}), rv({2, 2})));
    CHECK_THROWS_AS(two_rich_points(lines), Error);
}

TEST_CASE("thread count does not change the output")
{
    auto a = merge(gen_regulus_lines(8, 4), gen_random_conics(3, 6, 3, 4), "r", "c");
    const auto one = to_json(two_rich_points(a.curves, 1)).dump();
    CHECK(to_json(two_rich_points(a.curves, 4)).dump() == one);
    CHECK(to_json(two_rich_points(a.curves, 7)).dump() == one);
}

TEST_CASE("adding a curve never decreases the rich-point count")
{
    auto a = gen_random_lines(2, 20, 3, 9);
    std::vector<ParamCurve> prefix;
    std::size_t last = 0;
    for (const auto& c : a.curves) {
        prefix.push_back(c);
        const auto now = two_rich_points(prefix).p2();
        CHECK(now >= last);
        last = now;
    }
}

TEST_CASE("rich curves among flats")
{
    auto line = ParamCurve::line("l", rv({0, 1, 0, 0}), rv({1, 0, 1, 1}));
    auto bundle = gen_flats_through_line(7, line, 2);
    auto rc = two_rich_curves(bundle.surfaces, {});
    CHECK(rc.exhaustive);
    REQUIRE(rc.curves.size() == 1);
    CHECK(rc.curves[0].surfaces.size() == 7);
    CHECK(curves_identical(rc.curves[0].curve, line));
    CHECK(rc.curves[0].curve.label() == rc.curves[0].surfaces[0] + "&" + rc.curves[0].surfaces[1]);
    CHECK(incidence_sum(bundle.surfaces, {}) == 7);

    // A supplied candidate keeps its label.
    auto named = two_rich_curves(bundle.surfaces, {line});
    REQUIRE(named.curves.size() == 1);
    CHECK(named.curves[0].curve.label() == "l");

    auto other = ParamCurve::line("m", rv({3, 0, 0, 1}), rv({0, 1, 2, 0}));
    auto two = merge(bundle, gen_flats_through_line(5, other, 3), "a", "b");
    CHECK(incidence_sum(two.surfaces, {}) == 12);

    auto generic = gen_random_flats(12, 6);
    CHECK(two_rich_curves(generic.surfaces, {}).curves.empty());
    CHECK(incidence_sum(generic.surfaces, {}) == 0);

    auto dup = bundle.surfaces;
    dup.push_back(SurfacePatch::flat("copy", bundle.surfaces[0].flat_point(), bundle.surfaces[0].flat_u(),
                                     bundle.surfaces[0].flat_v()));
    CHECK_THROWS_AS(two_rich_curves(dup, {}), Error);
}

TEST_CASE("rich curves on parametrized surfaces")
{
    // z = x^2 + y^2 and z = x^2 + y share the conic (t, 0, t^2).
    MPoly u = MPoly::variable(2, 0), v = MPoly::variable(2, 1);
    MPoly x = MPoly::variable(3, 0), y = MPoly::variable(3, 1), z = MPoly::variable(3, 2);
    auto s1 = SurfacePatch::parametrized("P", {u, v, u * u + v * v}, 2, {z - x * x - y * y});
    auto s2 = SurfacePatch::parametrized("Q", {u, v, u * u + v}, 2, {z - x * x - y});
    ParamCurve conic("k", {UPoly::identity(), UPoly(), UPoly::monomial(Rational(1), 2)});
    ParamCurve stray("s", {UPoly::identity(), UPoly::constant(Rational(1)), UPoly::identity()});
    auto rc = two_rich_curves({s1, s2}, {stray, conic});
    CHECK_FALSE(rc.exhaustive);
    REQUIRE(rc.curves.size() == 1);
    CHECK(rc.curves[0].curve.label() == "k");
    CHECK(rc.curves[0].surfaces == std::vector<std::string>{"P", "Q"});
}

TEST_CASE("union bound on explicit member sets")
{
    auto disjoint = union_bound_check({{"a", "b"}, {"c", "d"}, {"e", "f"}}, Rational(0));
    CHECK(disjoint.hypothesis_holds);
    CHECK(disjoint.lhs == 6);
    CHECK(disjoint.union_size == 6);
    CHECK(disjoint.rhs == 12);
    CHECK(disjoint.inequality_holds);
    CHECK(disjoint.A == 2);
    CHECK(disjoint.min_bound == 4);

    auto thin = union_bound_check({{"a"}, {"b", "c", "d"}}, Rational(1));
    CHECK_FALSE(thin.hypothesis_holds);
    CHECK(thin.A == 1);
    CHECK(thin.min_bound == 1);
}

TEST_CASE("union bound on grid planes")
{
    // Planes x = i, y = j, z = k through the grid; adjacent families share lines.
    const std::size_t k = 4;
    auto grid = gen_grid_lines(k);
    std::vector<SurfacePatch> planes;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        for (std::size_t i = 0; i < k; ++i) {
            RatVec p(3, Rational(0)), e1(3, Rational(0)), e2(3, Rational(0));
            p[axis] = Rational(static_cast<long>(i));
            e1[(axis + 1) % 3] = 1;
            e2[(axis + 2) % 3] = 1;
            planes.push_back(SurfacePatch::flat("S" + std::to_string(axis) + std::to_string(i), p, e1, e2));
        }
    }
    auto u = union_bound_check(planes, grid.curves, Rational(1, 6));
    // Each plane holds 2k grid lines; each line lies in exactly two planes.
    CHECK(u.A == 2 * k);
    CHECK(u.lhs == 3 * k * 2 * k);
    CHECK(u.union_size == 3 * k * k);
    CHECK(u.hypothesis_holds);
    CHECK(u.inequality_holds);
    CHECK(u.lhs == u.rhs);

    std::set<std::string> oracle;
    for (const auto& s : planes)
        for (const auto& c : grid.curves)
            if (curve_on_surface(c, s)) oracle.insert(c.label());
    CHECK(u.union_size == oracle.size());
}

TEST_CASE("report serialization")
{
    auto r = two_rich_points(gen_grid_lines(2).curves);
    auto j = to_json(r);
    CHECK(j["p2"] == 8);
    CHECK(j["counts_by_multiplicity"]["3"] == 8);
    CHECK_FALSE(j.contains("wall_time"));
    CHECK(to_json(r, true).contains("wall_time"));
    const auto csv = to_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}
