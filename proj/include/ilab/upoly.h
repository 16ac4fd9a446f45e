#pragma once

#include "ilab/rational.h"

#include <cstddef>
#include <utility>
#include <vector>

namespace ilab {

/// Dense univariate polynomial over Q. Coefficients are stored in ascending
/// order with trailing zeros trimmed; the zero polynomial has no coefficients.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(RatVec coeffs);

    static UPoly constant(const Rational& c);
    static UPoly monomial(const Rational& c, int power);
    /// The identity polynomial t.
    static UPoly identity();
    /// a + b*t
    static UPoly linear(const Rational& a, const Rational& b);

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const RatVec& coeffs() const { return coeffs_; }
    /// Coefficient of t^i; zero beyond the degree.
    Rational coeff(std::size_t i) const;
    const Rational& leading() const;

    Rational eval(const Rational& t) const;
    int sign_at(const Rational& t) const;
    UPoly derivative() const;

    /// Scaled to a monic polynomial (zero stays zero).
    UPoly monic() const;
    /// Integer coefficients with content 1 and positive leading coefficient.
    UPoly primitive() const;
    /// p(-t)
    UPoly reflected() const;

    UPoly operator-() const;
    UPoly& operator+=(const UPoly& o);
    UPoly& operator-=(const UPoly& o);
    UPoly& operator*=(const Rational& c);
    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(UPoly a, const Rational& c) { return a *= c; }
    friend UPoly operator*(const Rational& c, UPoly a) { return a *= c; }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.coeffs_ == b.coeffs_; }

    /// Quotient and remainder; throws on division by zero.
    static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);

    std::string to_string(char var = 't') const;

private:
    void trim();
    RatVec coeffs_;
};

/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
/// p / gcd(p, p'), made primitive. Zero stays zero.
UPoly squarefree_part(const UPoly& p);

/// Canonical Sturm sequence p, p', -rem(...), ...
std::vector<UPoly> sturm_sequence(const UPoly& p);
int sign_variations(const std::vector<UPoly>& seq, const Rational& x);
int sign_variations_at_infinity(const std::vector<UPoly>& seq, bool positive);

/// Number of distinct real roots of p in the open interval (lo, hi).
/// Endpoint roots are divided out exactly before counting. Throws on the zero
/// polynomial or lo >= hi.
std::size_t sturm_root_count(const UPoly& p, const Rational& lo, const Rational& hi);
/// Number of distinct real roots of p on the whole line.
std::size_t real_root_count(const UPoly& p);

/// 1 + max |a_i / a_n|; every complex root has modulus strictly below it.
Rational cauchy_bound(const UPoly& p);

/// Range enclosure of p over [lo, hi] by interval Horner evaluation.
std::pair<Rational, Rational> interval_eval(const UPoly& p, const Rational& lo, const Rational& hi);

/// det of the Sylvester matrix of (p, q), p's rows first.
Rational resultant(const UPoly& p, const UPoly& q);

}  // namespace ilab
