#include <doctest.h>

#include "ilab/arrangements.h"
#include "ilab/incidence.h"
#include "ilab/structure.h"
#include "oracles.h"

#include <cmath>
#include <map>

using namespace ilab;
using namespace ilab::oracle;

namespace {

RatVec rv(std::initializer_list<long> c)
{
    RatVec v;
    for (long x : c) v.emplace_back(x);
    return v;
}

MPoly var(std::size_t n, std::size_t i) { return MPoly::variable(n, i); }

bool proportional(const MPoly& a, const MPoly& b) { return a.primitive() == b.primitive() || a.primitive() == (-b).primitive(); }

// Appends a constant last coordinate.
std::vector<ParamCurve> lift(const std::vector<ParamCurve>& cs, long value = 0)
{
    std::vector<ParamCurve> out;
    for (const auto& c : cs) {
        auto comps = c.components();
        comps.push_back(UPoly::constant(Rational(value)));
        out.emplace_back(c.label(), std::move(comps));
    }
    return out;
}

std::size_t stage(const Decomposition& d, const std::string& name)
{
    for (const auto& [k, v] : d.stage_log)
        if (k == name) return v;
    FAIL("missing stage " << name);
    return 0;
}

std::vector<std::vector<std::string>> member_sets(const Decomposition& d)
{
    std::vector<std::vector<std::string>> out;
    for (const auto& m : d.M) out.push_back(m.curves);
    for (const auto& s : d.S) out.push_back(s.curves);
    return out;
}

// Residual against the brute-force counter: same points, same curve sets.
void check_residual_against_oracle(const std::vector<ParamCurve>& L, const Decomposition& d)
{
    const auto expected = uncovered(pair_oracle(L), member_sets(d));
    REQUIRE(d.residual_rich_points.size() == expected.size());
    for (const auto& [p, labels] : expected) {
        bool found = false;
        for (const auto& r : d.residual_rich_points)
            if (compare(r.coords, p) == 0) {
                found = true;
                CHECK(std::vector<std::string>(labels.begin(), labels.end()) == r.labels);
            }
        CHECK(found);
    }
}

void check_sound(const std::vector<ParamCurve>& L, const Decomposition& d)
{
    for (const auto* list : {&d.M, &d.S})
        for (const auto& m : *list)
            for (const auto& l : m.curves) {
                auto it = std::find_if(L.begin(), L.end(), [&](const ParamCurve& c) { return c.label() == l; });
                REQUIRE(it != L.end());
                CHECK(m.variety.contains(*it));
            }
    check_residual_against_oracle(L, d);
    const auto a = audit_decomposition(L, d, d.epsilon);
    CHECK(a.containment);
    CHECK(a.membership_complete);
    CHECK(a.residual_exact);
    CHECK(a.soundness);
}

void check_stage_relations(const Decomposition& d)
{
    if (d.dim == 4 && stage(d, "n") > 8) {
        CHECK(stage(d, "S2") >= stage(d, "S1"));
        CHECK(stage(d, "S4_low") <= stage(d, "S4"));
        CHECK(stage(d, "S5") <= stage(d, "S4_low"));
        CHECK(stage(d, "M") <= stage(d, "M2") + stage(d, "M3"));
        CHECK(stage(d, "M2") <= stage(d, "M1"));
        CHECK(stage(d, "S") <= stage(d, "S5"));
        CHECK(d.M.size() == stage(d, "M"));
        CHECK(d.S.size() == stage(d, "S"));
    }
    CHECK(stage(d, "residual") == d.residual_rich_points.size());
}

SurfacePatch plane3() { return SurfacePatch::flat("P", rv({0, 0, 1}), rv({1, 2, 0}), rv({0, 1, 3})); }
SurfacePatch flat4() { return SurfacePatch::flat("F", rv({1, 0, 2, -1}), rv({1, 1, 0, 2}), rv({0, 1, 3, 1})); }

}  // namespace

TEST_CASE("power thresholds are decided exactly")
{
    CHECK(compare_power(Rational(8), 1, 64, Rational(1, 2)) == 0);
    CHECK(compare_power(Rational(9), 1, 64, Rational(1, 2)) == 1);
    CHECK(compare_power(Rational(7), 1, 64, Rational(1, 2)) == -1);
    CHECK(compare_power(Rational(1, 2), 1, 4, Rational(-1, 2)) == 0);
    CHECK(compare_power(Rational(4), 2, 8, Rational(1, 3)) == 0);
    CHECK(ceil_power(1, 64, Rational(1, 3)) == 4);
    CHECK(ceil_power(1, 27, Rational(2, 3)) == 9);
    CHECK(ceil_power(2, 40, Rational(3, 5)) == 19);
    const Rational e = (Rational(2, 3) - Rational(1, 5)) * (Rational(1, 2) + Rational(1, 20));
    CHECK(e == Rational(77, 300));
    for (std::size_t n : {5, 60, 200, 1000}) {
        const auto c = ceil_power(1, n, e);
        CHECK(static_cast<double>(c) >= std::pow(static_cast<double>(n), 77.0 / 300) - 1e-9);
        CHECK(static_cast<double>(c) - 1 < std::pow(static_cast<double>(n), 77.0 / 300));
    }
    CHECK_THROWS_AS(compare_power(Rational(-1), 1, 4, Rational(1)), Error);
}

TEST_CASE("config validation")
{
    DecompConfig c;
    CHECK_NOTHROW(c.validate());
    c.epsilon = Rational(1, 3);
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.E = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.S_prune_C2 = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK_THROWS_AS(decompose_r3(gen_random_lines(4, 3, 5, 1).curves), DimensionMismatch);
    CHECK_THROWS_AS(decompose_r4(gen_random_lines(3, 3, 5, 1).curves), DimensionMismatch);
}

TEST_CASE("regulus lines decompose onto the saddle")
{
    auto L = gen_regulus_lines(20, 1).curves;
    auto d = decompose_r3(L);
    REQUIRE(d.S.size() == 1);
    CHECK(d.M.empty());
    CHECK(d.S[0].variety.degree_bound == 2);
    CHECK(proportional(d.S[0].variety.generators.front(), var(3, 0) * var(3, 1) - var(3, 2)));
    CHECK(d.S[0].curves.size() == 40);
    CHECK(d.residual_rich_points.empty());
    CHECK(stage(d, "P2") == 400);
    check_sound(L, d);
}

TEST_CASE("small arrangements are a base case")
{
    auto grid = gen_grid_lines(2).curves;
    std::vector<ParamCurve> L(grid.begin(), grid.begin() + 8);
    auto d = decompose_r3(L);
    CHECK(d.S.empty());
    CHECK(d.residual_rich_points.size() == two_rich_points(L).p2());
    CHECK(stage(d, "base_case") == 1);
    check_sound(L, d);
}

TEST_CASE("a plane of lines among generic lines")
{
    auto arr = merge(gen_lines_in_flat(3, 30, plane3(), 3), gen_random_lines(3, 30, 10, 4), "p", "g");
    auto d = decompose_r3(arr.curves);
    REQUIRE(d.S.size() >= 1);
    const auto& s = d.S.front();
    CHECK(s.curves.size() == 30);
    for (const auto& l : s.curves) CHECK(l.front() == 'p');
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(s.variety.generators.front().sign_at(plane3().point_at(Rational(a), Rational(b))) == 0);
    // No residual point sees two plane lines.
    for (const auto& r : d.residual_rich_points)
        CHECK(std::count_if(r.labels.begin(), r.labels.end(), [](const std::string& l) { return l.front() == 'p'; }) <= 1);
    check_sound(arr.curves, d);
}

TEST_CASE("lines in a 2-flat of R4 give the flat as the only surface")
{
    auto L = gen_lines_in_flat(4, 16, flat4(), 2).curves;
    auto d = decompose_r4(L);
    CHECK(d.M.empty());
    REQUIRE(d.S.size() == 1);
    CHECK(d.S[0].curves.size() == 16);
    CHECK(d.S[0].variety.generators.size() == 2);
    for (int a = -1; a < 2; ++a)
        for (int b = -1; b < 2; ++b)
            for (const auto& g : d.S[0].variety.generators) CHECK(g.sign_at(flat4().point_at(Rational(a), Rational(b))) == 0);
    CHECK(d.residual_rich_points.empty());
    check_sound(L, d);
    check_stage_relations(d);
}

TEST_CASE("half the lines in a hyperplane")
{
    auto L = merge(Arrangement{4, lift(gen_regulus_lines(15, 3).curves), {}, {}}, gen_random_lines(4, 30, 10, 5), "h", "g").curves;
    DecompConfig c;
    c.M_prune_factor = Rational(1, 2);
    auto d = decompose_r4(L, c);
    REQUIRE(d.M.size() == 1);
    CHECK(proportional(d.M[0].variety.generators.front(), var(4, 3)));
    CHECK(d.M[0].curves.size() == 30);
    check_sound(L, d);
    check_stage_relations(d);

    // Default pruning keeps the hyperplane out of M; its saddle surfaces as S.
    auto e = decompose_r4(L);
    CHECK(e.M.empty());
    REQUIRE(e.S.size() == 1);
    CHECK(e.S[0].curves.size() == 30);
    check_sound(L, e);
    check_stage_relations(e);
}

TEST_CASE("generic lines in R4 decompose to nothing")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto L = gen_random_lines(4, 60, 10, seed).curves;
        auto d = decompose_r4(L);
        CHECK(d.M.empty());
        CHECK(d.S.empty());
        CHECK(d.residual_rich_points.empty());
        check_stage_relations(d);
    }
}

TEST_CASE("soundness on assorted arrangements")
{
    std::vector<std::vector<ParamCurve>> r3 = {
        gen_grid_lines(3).curves,
        gen_regulus_lines(6, 2).curves,
        merge(gen_regulus_lines(8, 1), gen_random_lines(3, 20, 4, 7), "q", "r").curves,
        gen_lines_in_flat(3, 20, plane3(), 5, true).curves,
        merge(gen_grid_lines(2), gen_random_conics(3, 12, 3, 8), "l", "c").curves,
    };
    for (const auto& L : r3) {
        auto d = decompose_r3(L);
        check_sound(L, d);
        check_stage_relations(d);
    }
    std::vector<std::vector<ParamCurve>> r4 = {
        lift(gen_grid_lines(3).curves, 2),
        gen_lines_in_flat(4, 24, flat4(), 1, true).curves,
        merge(gen_lines_in_flat(4, 20, flat4(), 3), gen_random_lines(4, 25, 3, 9), "f", "g").curves,
        merge(Arrangement{4, lift(gen_regulus_lines(10, 5).curves), {}, {}}, gen_lines_in_hypersurface(var(4, 0) - var(4, 3), 20, 4), "q", "h")
            .curves,
    };
    for (const auto& L : r4) {
        auto d = decompose_r4(L);
        check_sound(L, d);
        check_stage_relations(d);
    }
}

TEST_CASE("decompositions are deterministic")
{
    auto L = merge(Arrangement{4, lift(gen_regulus_lines(12, 3).curves), {}, {}}, gen_random_lines(4, 20, 6, 5), "h", "g").curves;
    DecompConfig c;
    c.seed = 7;
    const auto a = to_json(decompose_r4(L, c)).dump();
    CHECK(a == to_json(decompose_r4(L, c)).dump());
    c.threads = 3;
    CHECK(a == to_json(decompose_r4(L, c)).dump());
    auto back = decomposition_from_json(Json::parse(a));
    CHECK(to_json(back).dump() == a);
}

TEST_CASE("audit detects corrupted decompositions")
{
    auto L = lift(gen_regulus_lines(10, 1).curves);
    auto d = decompose_r4(L);
    auto a = audit_decomposition(L, d, d.epsilon);
    CHECK(a.sound());
    for (const auto& c : a.contracts) CHECK(c.holds);
    CHECK(std::isfinite(a.C_meas));

    // One false membership.
    auto extra = L;
    extra.push_back(ParamCurve::line("zz", rv({0, 0, 0, 1}), rv({1, 1, 1, 1})));
    auto bad = d;
    REQUIRE(!bad.M.empty());
    bad.M[0].curves.push_back("zz");
    auto b = audit_decomposition(extra, bad, d.epsilon);
    CHECK_FALSE(b.containment);
    CHECK_FALSE(b.sound());

    // A dropped residual point.
    auto c = decompose_r3(merge(gen_regulus_lines(4, 1), gen_random_lines(3, 6, 3, 2), "q", "r").curves);
    REQUIRE(!c.residual_rich_points.empty());
    auto cl = merge(gen_regulus_lines(4, 1), gen_random_lines(3, 6, 3, 2), "q", "r").curves;
    c.residual_rich_points.pop_back();
    auto r = audit_decomposition(cl, c, c.epsilon);
    CHECK_FALSE(r.residual_exact);
    CHECK_FALSE(r.soundness);

    auto unknown = d;
    unknown.M[0].curves.push_back("nope");
    CHECK_THROWS_AS(audit_decomposition(L, unknown, d.epsilon), Error);

    auto empty = audit_decomposition({}, Decomposition{4, 0, Rational(1, 10), {}, {}, {}, {}, false}, Rational(1, 10));
    CHECK(empty.sound());
    for (const auto& k : empty.contracts) CHECK(k.holds);
    CHECK(empty.C_meas == 0);
}

TEST_CASE("hybrid points")
{
    // Lines in x4 = 0 and in x3 = 0, each crossing a line of the shared plane x3 = x4 = 0.
    std::vector<ParamCurve> L;
    for (long j = 0; j < 2; ++j) L.push_back(ParamCurve::line("c" + std::to_string(j), rv({0, j, 0, 0}), rv({1, 0, 0, 0})));
    for (long k = 0; k < 4; ++k) {
        L.push_back(ParamCurve::line("a" + std::to_string(k), rv({k, 0, 0, 0}), rv({0, 1, 1, 0})));
        L.push_back(ParamCurve::line("b" + std::to_string(k), rv({k, 1, 0, 0}), rv({0, 1, 0, 1})));
    }
    const Variety m1{{var(4, 3)}, 3, 1, "M1"}, m2{{var(4, 2)}, 3, 1, "M2"};
    const Variety plane{{var(4, 2), var(4, 3)}, 2, 1, "S1"};

    // Explicit classification of every brute-force point.
    std::map<std::string, std::vector<std::string>> LM;
    for (const auto* m : {&m1, &m2})
        for (const auto& c : L)
            if (m->contains(c)) LM[m->label].push_back(c.label());
    std::set<std::string> in_plane;
    for (const auto& c : L)
        if (plane.contains(c)) in_plane.insert(c.label());
    std::size_t expected = 0;
    for (const auto& [p, labels] : pair_oracle(L)) {
        bool hybrid = false;
        for (const auto& [m, members] : LM) {
            std::size_t on = 0, star = 0;
            for (const auto& l : labels)
                if (std::find(members.begin(), members.end(), l) != members.end()) ++on, star += !in_plane.count(l);
            std::size_t shared = 0;
            for (const auto& l : labels) shared += in_plane.count(l);
            hybrid = hybrid || (on >= 2 && star < 2 && shared < 2);
        }
        expected += hybrid;
    }
    CHECK(expected == 8);
    CHECK(hybrid_points(L, {m1, m2}, {plane}) == expected);
    CHECK(hybrid_points(L, {}, {plane}) == 0);
    CHECK(hybrid_points(L, {Variety{{var(4, 3) * var(4, 2)}, 3, 2, "all"}}, {}) == 0);
}
