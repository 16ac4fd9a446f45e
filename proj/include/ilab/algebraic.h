#pragma once

#include "ilab/upoly.h"

#include <optional>
#include <vector>

namespace ilab {

/// A real algebraic number given by a squarefree integer polynomial and an
/// isolating interval.
///
/// Rational values are stored with a linear minimal polynomial and a
/// degenerate interval lo == hi. Irrational values keep an open interval
/// (lo, hi) whose endpoints are not roots and which contains exactly one root
/// of a minpoly that has no rational roots. Values are immutable; refinement
/// returns a new object.
class AlgebraicNumber {
public:
    AlgebraicNumber() : AlgebraicNumber(Rational(0)) {}
    AlgebraicNumber(const Rational& value);  // NOLINT: implicit by design of the numeric tower

    /// Validates the isolating-interval invariant; throws on violation.
    AlgebraicNumber(UPoly minpoly, Rational lo, Rational hi);

    bool is_rational() const { return lo_ == hi_; }
    /// Only meaningful when is_rational().
    const Rational& rational_value() const { return lo_; }
    const UPoly& minpoly() const { return minpoly_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    /// Bisects the isolating interval once. No-op for rationals.
    AlgebraicNumber refined() const;
    /// Refines until hi - lo <= width.
    AlgebraicNumber refined_to(const Rational& width) const;

    int sign() const;
    double approx() const;
    std::string to_string() const;

    friend int compare(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }
    friend bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) < 0; }

private:
    struct Trusted {};
    AlgebraicNumber(Trusted, UPoly minpoly, Rational lo, Rational hi)
        : minpoly_(std::move(minpoly)), lo_(std::move(lo)), hi_(std::move(hi)) {}
    static std::vector<AlgebraicNumber> quadratic_roots(const UPoly& q);
    /// A much narrower isolating interval from a float estimate, if verified.
    std::optional<AlgebraicNumber> float_bracket() const;
    friend std::vector<AlgebraicNumber> isolate_roots(const UPoly& p);
    friend AlgebraicNumber evaluate(const UPoly& g, const AlgebraicNumber& s);

    UPoly minpoly_;
    Rational lo_, hi_;
};

/// One AlgebraicNumber per distinct real root of p, in increasing order.
/// Rational roots are detected exactly and returned as rationals.
std::vector<AlgebraicNumber> isolate_roots(const UPoly& p);

/// g(s) as an exact algebraic number.
AlgebraicNumber evaluate(const UPoly& g, const AlgebraicNumber& s);

/// Exact test g(s) == v without constructing g(s).
bool evaluates_to(const UPoly& g, const AlgebraicNumber& s, const AlgebraicNumber& v);

/// A rational strictly between a and b; requires a < b.
Rational separating_rational(const AlgebraicNumber& a, const AlgebraicNumber& b);

using AlgebraicPoint = std::vector<AlgebraicNumber>;

/// Lexicographic exact comparison.
int compare(const AlgebraicPoint& a, const AlgebraicPoint& b);

struct AlgebraicPointLess {
    bool operator()(const AlgebraicPoint& a, const AlgebraicPoint& b) const { return compare(a, b) < 0; }
};

}  // namespace ilab
