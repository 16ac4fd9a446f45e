#pragma once

#include "ilab/serialize.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ilab {

/// Gaussian rational.
struct Complex {
    Rational re, im;

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    bool is_zero() const { return re == 0 && im == 0; }
};

class ComplexPoly {
public:
    using Terms = std::map<Exponent, Complex, GradedLess>;

    explicit ComplexPoly(std::size_t nvars = 1) : nvars_(nvars) {}
    static ComplexPoly constant(std::size_t nvars, const Complex& c);
    static ComplexPoly variable(std::size_t nvars, std::size_t i);
    static ComplexPoly monomial(std::size_t nvars, const Exponent& e, const Complex& c);
    /// Univariate, coefficients from the constant term up.
    static ComplexPoly univariate(const std::vector<Complex>& coeffs);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    const Terms& terms() const { return terms_; }
    void add_term(const Exponent& e, const Complex& c);

    Complex eval(const std::vector<Complex>& z) const;
    ComplexPoly derivative(std::size_t var) const;

    ComplexPoly& operator+=(const ComplexPoly& o);
    friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
    friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b);
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
    friend bool operator==(const ComplexPoly& a, const ComplexPoly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }
    ComplexPoly pow(int k) const;
    std::string to_string() const;

private:
    std::size_t nvars_ = 1;
    Terms terms_;
};

struct Realified {
    MPoly re, im;
};

/// Real and imaginary parts in the variables x1, y1, ..., xd, yd.
Realified realify(const ComplexPoly& p);

/// 1 + max |a_k| / |a_E| over P and P', with |a| bounded above by |re| + |im|
/// and below by max(|re|, |im|): every root of P and P' has smaller modulus.
Rational root_radius_bound(const ComplexPoly& p);

struct ComponentCount {
    /// Components of the closed disk minus Z(Re P).
    std::size_t count = 0;
    /// Sign changes of Re P around the boundary circle (at most 2 deg P).
    std::size_t boundary_sign_changes = 0;
    /// Boundary arcs between consecutive zeros of Re P on the circle.
    std::size_t arcs = 0;
    int degree = 0;
    Rational radius;
    Rational root_bound;
    /// Final grid step and the number of grids evaluated.
    Rational h;
    std::size_t refinements = 0;
    /// Grid classes reaching no boundary arc (grid artifacts by the maximum principle).
    std::size_t interior_fragments = 0;
    /// The count agreed on the last three grids.
    bool stable = false;
};

/// Univariate P only. The boundary circle is parametrized rationally and the
/// sign of Re P on it is decided exactly; grid points in the disk are joined
/// when 4-adjacent with equal sign, and to the boundary arc at their angle.
/// Without h the grid is halved from R/16 until three successive counts
/// agree (at most R/512). Throws when d != 1, P = 0, or the radius is below
/// root_radius_bound.
ComponentCount complement_components_1d(const ComplexPoly& p, std::optional<Rational> radius = std::nullopt,
                                        std::optional<Rational> h = std::nullopt);

struct StressTrial {
    std::string kind;  // "random", "sector" or "optimized"
    ComplexPoly poly;
    /// Points per complement component, largest first.
    std::vector<std::size_t> loads;
    std::size_t max_load = 0;
    std::size_t on_zero_set = 0;
};

struct StressReport {
    std::size_t d = 1;
    int E = 0;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t min_max_load = 0;
    /// ceil(n / (2E)).
    std::size_t lemma_bound = 0;
    /// Every trial put at least ceil((n - on_zero_set) / (2E)) points in one component.
    bool lemma_holds = true;
    /// E >= n: a single point per component is already within reach.
    bool trivial_regime = false;
    /// d = 2 components are estimated by sampling.
    bool heuristic = false;
    std::size_t best = 0;
    std::vector<StressTrial> log;
};

/// Points in C^d given as 2d real coordinates (x1, y1, ...). Each point is
/// assigned to a component by ascending |Re P| out to a large circle and
/// reading the boundary arc it reaches. Trials cycle through random
/// polynomials, rotated sector polynomials c (z - z0)^E, and hill climbing
/// from the best so far.
StressReport conjecture_stress(const std::vector<RatVec>& X, int E, std::size_t trials, std::uint64_t seed);

/// Components of the complement for points already assigned to a polynomial.
std::vector<std::size_t> component_loads(const ComplexPoly& p, const std::vector<RatVec>& X, std::size_t* on_zero = nullptr);

Json to_json(const Complex& c);
Json to_json(const ComplexPoly& p);
ComplexPoly complex_poly_from_json(const Json& j);
Json to_json(const ComponentCount& c);
Json to_json(const StressReport& r, bool with_trials = false);

}  // namespace ilab
