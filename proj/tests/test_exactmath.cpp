#include <doctest.h>

#include "ilab/algebraic.h"
#include "ilab/linalg.h"
#include "ilab/mpoly.h"

#include <cmath>
#include <random>

using namespace ilab;

namespace {

UPoly up(std::initializer_list<long> c)
{
    RatVec v;
    for (long x : c) v.emplace_back(x);
    return UPoly(v);
}

Rational q(long n, long d = 1)
{
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Cofactor expansion along the first row; independent of elimination.
Rational laplace_det(const std::vector<RatVec>& a)
{
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Rational det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0) continue;
        std::vector<RatVec> minor;
        for (std::size_t r = 1; r < n; ++r) {
            RatVec row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(a[r][c]);
            minor.push_back(row);
        }
        Rational term = a[0][j] * laplace_det(minor);
        det += (j % 2 == 0) ? term : Rational(-term);
    }
    return det;
}

std::vector<RatVec> sylvester(const UPoly& p, const UPoly& r)
{
    const int m = p.degree(), n = r.degree();
    std::vector<RatVec> a(static_cast<std::size_t>(m + n), RatVec(static_cast<std::size_t>(m + n)));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) a[i][i + k] = p.coeff(static_cast<std::size_t>(m - k));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) a[n + i][i + k] = r.coeff(static_cast<std::size_t>(n - k));
    return a;
}

UPoly random_upoly(std::mt19937_64& rng, int deg, int bound)
{
    std::uniform_int_distribution<int> dist(-bound, bound);
    RatVec c;
    for (int i = 0; i <= deg; ++i) c.emplace_back(dist(rng));
    if (c.back() == 0) c.back() = 1;
    return UPoly(c);
}

double eval_double(const UPoly& p, double t)
{
    double acc = 0;
    for (int i = p.degree(); i >= 0; --i) acc = acc * t + p.coeff(static_cast<std::size_t>(i)).get_d();
    return acc;
}

}  // namespace

TEST_CASE("rational parsing and printing")
{
    CHECK(parse_rational("3/6") == q(1, 2));
    CHECK(parse_rational("-4") == q(-4));
    CHECK(to_string(q(-2, 4)) == "-1/2");
    CHECK(to_string(q(5)) == "5/1");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("sturm root counts")
{
    CHECK(sturm_root_count(up({-2, 0, 1}), q(-2), q(2)) == 2);
    CHECK(sturm_root_count(up({1, -2, 1}), q(0), q(2)) == 1);
    CHECK(sturm_root_count(up({0, -1, 0, 1}), q(1, 2), q(2)) == 1);
    // endpoint roots are excluded
    CHECK(sturm_root_count(up({0, -1, 0, 1}), q(-1), q(1)) == 1);
    CHECK_THROWS(sturm_root_count(UPoly{}, q(0), q(1)));
    CHECK_THROWS(sturm_root_count(up({1, 1}), q(1), q(1)));
}

TEST_CASE("sturm count is additive across a non-root split")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        UPoly p = random_upoly(rng, 5, 6);
        Rational a = -7, c = 7;
        Rational b = q(static_cast<long>(rng() % 13) - 6, 3);
        if (p.eval(a) == 0 || p.eval(b) == 0 || p.eval(c) == 0) continue;
        CHECK(sturm_root_count(p, a, c) == sturm_root_count(p, a, b) + sturm_root_count(p, b, c));
    }
}

TEST_CASE("isolate roots of known polynomials")
{
    auto r = isolate_roots(up({-2, 0, 1}));
    REQUIRE(r.size() == 2);
    CHECK_FALSE(r[0].is_rational());
    CHECK(r[0].lo() < r[0].hi());
    CHECK(r[0].hi() <= r[1].lo());
    CHECK(r[0].approx() == doctest::Approx(-std::sqrt(2.0)));
    CHECK(r[1].approx() == doctest::Approx(std::sqrt(2.0)));
    CHECK(isolate_roots(up({1, 0, 1})).empty());

    // (2t - 1)(t + 3)(t^2 - 5): rational roots are exact.
    UPoly p = up({-1, 2}) * up({3, 1}) * up({-5, 0, 1});
    auto roots = isolate_roots(p * p);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0] == AlgebraicNumber(q(-3)));
    CHECK(roots[2] == AlgebraicNumber(q(1, 2)));
    CHECK(roots[2].is_rational());
    CHECK_FALSE(roots[1].is_rational());
    CHECK(roots[1].minpoly() == up({-5, 0, 1}));
    CHECK_THROWS(isolate_roots(UPoly{}));
}

TEST_CASE("isolate roots of random degree-6 polynomials agrees with a sign-change oracle")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        UPoly p = random_upoly(rng, 6, 9);
        auto roots = isolate_roots(p);
        auto seq = sturm_sequence(squarefree_part(p));
        int at_inf = sign_variations_at_infinity(seq, false) - sign_variations_at_infinity(seq, true);
        CHECK(static_cast<int>(roots.size()) == at_inf);

        // Floating bisection oracle: count sign changes on a fine grid.
        const double bound = cauchy_bound(p).get_d();
        const int steps = 200000;
        int changes = 0;
        double prev = eval_double(p, -bound);
        for (int i = 1; i <= steps; ++i) {
            double v = eval_double(p, -bound + 2 * bound * i / steps);
            if ((prev < 0 && v > 0) || (prev > 0 && v < 0)) ++changes;
            if (v != 0) prev = v;
        }
        // Odd-multiplicity roots change sign; every root of the squarefree part does.
        auto roots_sf = isolate_roots(squarefree_part(p));
        CHECK(roots_sf.size() == roots.size());
        int odd = 0;
        for (const auto& r : roots) {
            UPoly g = p;
            int mult = 0;
            UPoly m = r.minpoly();
            while (true) {
                auto [quo, rem] = UPoly::divmod(g, m);
                if (!rem.is_zero()) break;
                g = quo;
                ++mult;
            }
            if (mult % 2 == 1) ++odd;
        }
        CHECK(changes == odd);
        for (std::size_t i = 0; i + 1 < roots.size(); ++i) CHECK(roots[i] < roots[i + 1]);
    }
}

TEST_CASE("algebraic number equality and comparison")
{
    AlgebraicNumber s2a(up({-2, 0, 1}), q(1), q(2));
    AlgebraicNumber s2b(up({-4, 0, 0, 0, 1}), q(0), q(3));
    AlgebraicNumber s3(up({-3, 0, 1}), q(1), q(2));
    CHECK(s2a == s2b);
    CHECK(s2a != s3);
    CHECK(s2a < s3);
    CHECK(compare(s3, s2b) == 1);
    CHECK(AlgebraicNumber(q(3, 2)) < s3);
    CHECK(s2a < AlgebraicNumber(q(3, 2)));
    CHECK(AlgebraicNumber(up({-4, 0, 1}), q(0), q(3)).is_rational());
    CHECK_THROWS(AlgebraicNumber(up({-2, 0, 1}), q(-2), q(2)));
    CHECK(s2a.sign() == 1);
    CHECK(Rational(separating_rational(s2a, s3) * separating_rational(s2a, s3)) > 2);
}

TEST_CASE("evaluate a polynomial at an algebraic number")
{
    AlgebraicNumber s2(up({-2, 0, 1}), q(1), q(2));
    CHECK(evaluate(up({0, 0, 1}), s2) == AlgebraicNumber(q(2)));
    AlgebraicNumber v = evaluate(up({0, 0, 0, 1}), s2);  // 2 sqrt 2 = sqrt 8
    CHECK(v == AlgebraicNumber(up({-8, 0, 1}), q(2), q(3)));
    AlgebraicNumber w = evaluate(up({1, -1}), s2);  // 1 - sqrt 2
    CHECK(w.sign() == -1);
    CHECK(w.approx() == doctest::Approx(1 - std::sqrt(2.0)));
}

TEST_CASE("evaluates_to agrees with exact evaluation")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        UPoly m = random_upoly(rng, 3, 5);
        UPoly g = random_upoly(rng, 2, 3);
        UPoly other = random_upoly(rng, 2, 3);
        for (const auto& s : isolate_roots(m)) {
            const AlgebraicNumber v = evaluate(g, s);
            CHECK(evaluates_to(g, s, v));
            for (const auto& w : isolate_roots(m)) CHECK(evaluates_to(other, s, evaluate(other, w)) == (evaluate(other, s) == evaluate(other, w)));
            CHECK(evaluates_to(g, s, AlgebraicNumber(Rational(trial))) == (v == AlgebraicNumber(Rational(trial))));
        }
    }
    // sqrt(2)^2 = 2 and sqrt(2) + 1 is not -sqrt(2) + 1.
    auto roots = isolate_roots(up({-2, 0, 1}));
    CHECK(evaluates_to(up({0, 0, 1}), roots[1], AlgebraicNumber(q(2))));
    CHECK_FALSE(evaluates_to(up({1, 1}), roots[1], evaluate(up({1, 1}), roots[0])));
    CHECK(evaluates_to(up({1, -1}), roots[1], evaluate(up({1, 1}), roots[0])));
}

TEST_CASE("univariate resultant examples")
{
    // res_t(t - a, t - b) at a = 3, b = 5
    CHECK(abs(resultant(up({-3, 1}), up({-5, 1}))) == 2);
    CHECK(resultant(up({-1, 0, 1}), up({1, 1})) == 0);
    CHECK_THROWS(resultant(up({2}), up({3})));
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        UPoly a = random_upoly(rng, 3, 5), b = random_upoly(rng, 3, 5);
        CHECK(resultant(a, b) == laplace_det(sylvester(a, b)));
        // swapping two degree-3 inputs permutes 3x3 row blocks: sign (-1)^9
        CHECK(resultant(b, a) == -resultant(a, b));
    }
}

TEST_CASE("multivariate resultant examples")
{
    const MPoly s = MPoly::variable(2, 0), t = MPoly::variable(2, 1);
    MPoly r = resultant(s - t, s + t - MPoly::constant(2, 2), 1);
    MPoly expect = s * q(2) - MPoly::constant(2, 2);
    CHECK((r == expect || r == -expect));

    const MPoly a = MPoly::variable(3, 0), b = MPoly::variable(3, 1), x = MPoly::variable(3, 2);
    MPoly rab = resultant(x - a, x - b, 2);
    CHECK((rab == a - b || rab == b - a));

    // Random cubic pair in t with coefficients linear in s: resultant at s0
    // equals the univariate resultant of the specializations.
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> dist(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        MPoly p(2), g(2);
        for (int k = 0; k <= 3; ++k) {
            p.add_term({0, k}, dist(rng));
            p.add_term({1, k}, dist(rng));
            g.add_term({0, k}, dist(rng));
            g.add_term({1, k}, dist(rng));
        }
        p.add_term({0, 3}, p.coeff({0, 3}) == 0 && p.coeff({1, 3}) == 0 ? 1 : 0);
        g.add_term({0, 3}, g.coeff({0, 3}) == 0 && g.coeff({1, 3}) == 0 ? 1 : 0);
        MPoly res = resultant(p, g, 1);
        for (int s0 = -2; s0 <= 2; ++s0) {
            UPoly ps = p.substitute(0, s0).to_upoly(1), gs = g.substitute(0, s0).to_upoly(1);
            if (ps.degree() < 3 || gs.degree() < 3) continue;  // leading coefficient vanished
            CHECK(res.eval({Rational(s0), 0}) == laplace_det(sylvester(ps, gs)));
        }
    }
}

TEST_CASE("composition with a curve")
{
    const MPoly x = MPoly::variable(3, 0), y = MPoly::variable(3, 1), z = MPoly::variable(3, 2);
    CHECK((z - x * y).compose(std::vector<UPoly>{up({2}), up({0, 1}), up({0, 2})}).is_zero());
    CHECK((x * x + y * y - MPoly::constant(3, 1)).compose(std::vector<UPoly>{up({0, 1}), up({0}), up({0})}) ==
          up({-1, 0, 1}));
    CHECK((x * y - z).compose(std::vector<UPoly>{up({0, 1}), up({0, 1}), up({0})}) == up({0, 0, 1}));
    CHECK_THROWS_AS(x.compose(std::vector<UPoly>{up({1})}), DimensionMismatch);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dist(-5, 5);
    MPoly f(3);
    for (const auto& e : monomials_up_to(3, 3)) f.add_term(e, dist(rng));
    std::vector<UPoly> gamma{random_upoly(rng, 2, 4), random_upoly(rng, 2, 4), random_upoly(rng, 1, 4)};
    UPoly composed = f.compose(gamma);
    CHECK(composed.degree() <= f.degree() * 2);
    for (int i = 0; i < 100; ++i) {
        Rational t = q(dist(rng) * 7 + i, 1 + i % 5);
        CHECK(composed.eval(t) == f.eval({gamma[0].eval(t), gamma[1].eval(t), gamma[2].eval(t)}));
    }
}

TEST_CASE("veronese lift")
{
    RatVec v = veronese_lift({q(2), q(3)}, 2);
    CHECK(v == RatVec{q(2), q(3), q(4), q(6), q(9)});
    RatVec x{q(1, 3), q(-2), q(5)};
    CHECK(veronese_lift(x, 1) == x);
    CHECK(veronese_lift(x, 4).size() == 34);
    CHECK_THROWS(veronese_lift(x, 0));
}

TEST_CASE("exact division and polynomial helpers")
{
    const MPoly x = MPoly::variable(2, 0), y = MPoly::variable(2, 1);
    MPoly a = (x - y) * (x + y * q(2) + MPoly::constant(2, 1));
    auto d = MPoly::divide_exact(a, x - y);
    REQUIRE(d.has_value());
    CHECK(*d == x + y * q(2) + MPoly::constant(2, 1));
    CHECK_FALSE(MPoly::divide_exact(a, x + y).has_value());
    CHECK((x * q(3) - y * q(6)).primitive() == x - y * q(2));
    CHECK((y * q(-2) + x * q(4)).monic() == x - y * q(1, 2));
    CHECK((x * x * y + y).coefficients_in(0).size() == 3);
}

TEST_CASE("rational linear algebra")
{
    RatMatrix m{{q(1), q(2), q(3)}, {q(2), q(4), q(6)}};
    CHECK(rank(m, 3) == 1);
    auto ker = nullspace(m, 3);
    REQUIRE(ker.size() == 2);
    for (const auto& v : ker) CHECK(dot(m[0], v) == 0);
    auto sol = solve({{q(1), q(1)}, {q(1), q(-1)}}, {q(3), q(1)}, 2);
    REQUIRE(sol.has_value());
    CHECK(*sol == RatVec{q(2), q(1)});
    CHECK_FALSE(solve({{q(1), q(1)}, {q(1), q(1)}}, {q(3), q(1)}, 2).has_value());
    auto narrowed = restrict_kernel(ker, {{q(0), q(1), q(0)}});
    REQUIRE(narrowed.size() == 1);
    CHECK(narrowed[0][1] == 0);
}
