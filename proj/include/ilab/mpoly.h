#pragma once

#include "ilab/upoly.h"

#include <map>
#include <optional>
#include <vector>

namespace ilab {

using Exponent = std::vector<int>;

int total_degree(const Exponent& e);

/// Graded lexicographic order: lower total degree first; within a degree,
/// lexicographically larger exponents first, so (x, y, x^2, xy, y^2).
struct GradedLess {
    bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Sparse multivariate polynomial over Q. No zero coefficients are stored.
class MPoly {
public:
    using Terms = std::map<Exponent, Rational, GradedLess>;

    MPoly() = default;
    explicit MPoly(std::size_t nvars) : nvars_(nvars) {}

    static MPoly constant(std::size_t nvars, const Rational& c);
    /// x_i, zero-based.
    static MPoly variable(std::size_t nvars, std::size_t i);
    static MPoly monomial(std::size_t nvars, const Exponent& e, const Rational& c);
    /// p(x_var)
    static MPoly from_upoly(const UPoly& p, std::size_t nvars, std::size_t var);
    /// a_0 + sum a_i x_i over the given coefficient vector (length nvars + 1).
    static MPoly affine(const RatVec& coeffs);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for zero.
    int degree() const;
    int degree_in(std::size_t var) const;
    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }
    const Terms& terms() const { return terms_; }
    Rational coeff(const Exponent& e) const;
    /// The graded-lex largest term. Throws on zero.
    const std::pair<const Exponent, Rational>& leading_term() const;

    void add_term(const Exponent& e, const Rational& c);

    Rational eval(const RatVec& x) const;
    int sign_at(const RatVec& x) const;
    MPoly derivative(std::size_t var) const;

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    MPoly& operator*=(const Rational& c);
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    friend MPoly operator*(MPoly a, const Rational& c) { return a *= c; }
    friend MPoly operator*(const Rational& c, MPoly a) { return a *= c; }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }
    MPoly pow(int k) const;

    /// Substitutes x_i -> images[i]; all images share one ring.
    MPoly compose(const std::vector<MPoly>& images) const;
    /// t -> f(gamma(t)).
    UPoly compose(const std::vector<UPoly>& curve) const;
    /// Substitutes a rational value for x_var; the variable stays in the ring.
    MPoly substitute(std::size_t var, const Rational& value) const;
    /// Univariate view when only x_var occurs; throws otherwise.
    UPoly to_upoly(std::size_t var) const;

    /// f = sum_k c_k x_var^k with c_k free of x_var.
    std::vector<MPoly> coefficients_in(std::size_t var) const;

    /// Scaled so the leading term has coefficient 1. Zero stays zero.
    MPoly monic() const;
    /// Integer coefficients with content 1 and positive leading coefficient.
    MPoly primitive() const;

    /// Exact quotient a / b, or nullopt when b does not divide a.
    static std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b);

    std::string to_string() const;

private:
    std::size_t nvars_ = 0;
    Terms terms_;
};

/// Sylvester resultant eliminating x_var, p's rows first; computed with a
/// fraction-free determinant. Throws when both inputs are free of x_var or
/// either is zero.
MPoly resultant(const MPoly& p, const MPoly& q, std::size_t var);

/// Exponents of all monomials with degree in [min_degree, max_degree], in
/// graded order.
std::vector<Exponent> monomials_up_to(std::size_t nvars, int max_degree, int min_degree = 0);

/// Values at x of all monomials of degree 1..e in graded order.
RatVec veronese_lift(const RatVec& x, int e);

/// Values at x of the given monomials.
RatVec monomial_values(const std::vector<Exponent>& monomials, const RatVec& x);

}  // namespace ilab
