#include "ilab/algebraic.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace ilab {

namespace {

// Every rational root of an integer polynomial with leading coefficient lc has
// the form k / lc, so an open interval narrower than 1 / lc holds at most one
// candidate.
std::optional<Rational> rational_root_in(const UPoly& q, Rational lo, Rational hi)
{
    const Integer lc = abs(q.leading().get_num());
    const Rational width_limit(Integer(1), lc);
    int slo = q.sign_at(lo);
    while (hi - lo >= width_limit) {
        Rational mid = (lo + hi) / 2;
        int sm = q.sign_at(mid);
        if (sm == 0) return mid;
        if (sm == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Rational scaled = lo * lc;
    Integer k = scaled.get_num() / scaled.get_den();  // truncation toward zero
    for (Integer cand = k - 1; cand <= k + 1; ++cand) {
        Rational r(cand, lc);
        r.canonicalize();
        if (lo < r && r < hi && q.eval(r) == 0) return r;
    }
    return std::nullopt;
}

UPoly linear_minpoly(const Rational& r)
{
    // den * t - num
    return UPoly::linear(Rational(-r.get_num()), Rational(r.get_den()));
}

struct Isolation {
    std::vector<std::pair<Rational, Rational>> intervals;
    std::vector<Rational> exact;
};

void bisect(const UPoly& q, const std::vector<UPoly>& seq, const Rational& lo, const Rational& hi, int count,
            Isolation& out)
{
    if (count <= 0) return;
    if (count == 1) {
        out.intervals.emplace_back(lo, hi);
        return;
    }
    Rational mid = (lo + hi) / 2;
    if (q.eval(mid) == 0) {
        out.exact.push_back(mid);
        auto left = static_cast<int>(sturm_root_count(q, lo, mid));
        bisect(q, seq, lo, mid, left, out);
        bisect(q, seq, mid, hi, count - 1 - left, out);
        return;
    }
    int left = sign_variations(seq, lo) - sign_variations(seq, mid);
    bisect(q, seq, lo, mid, left, out);
    bisect(q, seq, mid, hi, count - left, out);
}

}  // namespace

// Closed form for squarefree quadratics; the vertex separates the two roots.
std::vector<AlgebraicNumber> AlgebraicNumber::quadratic_roots(const UPoly& q)
{
    const Rational a = q.coeff(2), b = q.coeff(1), c = q.coeff(0);
    const Rational disc = b * b - 4 * a * c;
    if (disc < 0) return {};
    const Rational vertex = -b / (2 * a);
    if (mpz_perfect_square_p(disc.get_num_mpz_t()) && mpz_perfect_square_p(disc.get_den_mpz_t())) {
        const Rational root(sqrt(disc.get_num()), sqrt(disc.get_den()));
        const Rational half = root / abs(2 * a);
        return {AlgebraicNumber(Rational(vertex - half)), AlgebraicNumber(Rational(vertex + half))};
    }
    const UPoly m = q.primitive();
    const Rational bound = cauchy_bound(m);
    return {AlgebraicNumber(Trusted{}, m, -bound, vertex), AlgebraicNumber(Trusted{}, m, vertex, bound)};
}

AlgebraicNumber::AlgebraicNumber(const Rational& value) : minpoly_(linear_minpoly(value)), lo_(value), hi_(value) {}

AlgebraicNumber::AlgebraicNumber(UPoly minpoly, Rational lo, Rational hi)
{
    if (minpoly.is_zero()) throw Error("AlgebraicNumber: zero minimal polynomial");
    if (hi < lo) throw Error("AlgebraicNumber: reversed interval");
    if (lo == hi) {
        if (minpoly.eval(lo) != 0) throw Error("AlgebraicNumber: degenerate interval is not a root");
        *this = AlgebraicNumber(lo);
        return;
    }
    if (minpoly.eval(lo) == 0 || minpoly.eval(hi) == 0)
        throw Error("AlgebraicNumber: interval endpoint is a root");
    if (sturm_root_count(minpoly, lo, hi) != 1) throw Error("AlgebraicNumber: interval does not isolate one root");
    for (auto root : isolate_roots(minpoly)) {
        if (root.is_rational()) {
            if (lo < root.lo_ && root.lo_ < hi) {
                *this = root;
                return;
            }
            continue;
        }
        while (true) {
            if (root.hi_ <= lo || root.lo_ >= hi) break;
            if (lo <= root.lo_ && root.hi_ <= hi) {
                *this = root;
                return;
            }
            root = root.refined();
        }
    }
    throw Error("AlgebraicNumber: root not found");
}

AlgebraicNumber AlgebraicNumber::refined() const
{
    if (is_rational()) return *this;
    Rational mid = (lo_ + hi_) / 2;
    int sm = minpoly_.sign_at(mid);
    if (sm == minpoly_.sign_at(lo_)) return AlgebraicNumber(Trusted{}, minpoly_, mid, hi_);
    return AlgebraicNumber(Trusted{}, minpoly_, lo_, mid);
}

std::optional<AlgebraicNumber> AlgebraicNumber::float_bracket() const
{
    // Double bisection proposes the root; the bracket is then checked exactly,
    // so a wrong float sign only costs the shortcut.
    Rational top = 0;
    for (const auto& a : minpoly_.coeffs()) top = std::max(top, Rational(abs(a)));
    std::vector<long double> c;
    for (const auto& a : minpoly_.coeffs()) c.push_back(static_cast<long double>(Rational(a / top).get_d()));
    auto f = [&](long double x) {
        long double v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
        return v;
    };
    long double a = lo_.get_d(), b = hi_.get_d();
    if (!(a < b)) return std::nullopt;
    const bool rising = f(b) > 0;
    for (int i = 0; i < 80 && a < b; ++i) {
        const long double m = (a + b) / 2;
        if (m <= a || m >= b) break;
        ((f(m) > 0) == rising ? b : a) = m;
    }
    const double x = static_cast<double>((a + b) / 2);
    const int slo = minpoly_.sign_at(lo_);
    for (double eps : {1e-13, 1e-10, 1e-7}) {
        const double step = eps * std::max(1.0, std::abs(x));
        Rational l(x - step), h(x + step);
        if (!(lo_ < l && h < hi_)) continue;
        const int sl = minpoly_.sign_at(l), sh = minpoly_.sign_at(h);
        if (sl == slo && sh == -slo) return AlgebraicNumber(Trusted{}, minpoly_, l, h);
    }
    return std::nullopt;
}

AlgebraicNumber AlgebraicNumber::refined_to(const Rational& width) const
{
    AlgebraicNumber r = *this;
    if (r.is_rational()) return r;
    int steps = 0;
    while (r.hi_ - r.lo_ > width) {
        if (++steps == 6)
            if (auto b = r.float_bracket()) r = std::move(*b);
        r = r.refined();
    }
    return r;
}

int AlgebraicNumber::sign() const { return compare(*this, AlgebraicNumber(Rational(0))); }

double AlgebraicNumber::approx() const
{
    if (is_rational()) return lo_.get_d();
    AlgebraicNumber r = refined_to(Rational(Integer(1), Integer(1) << 50));
    return Rational((r.lo_ + r.hi_) / 2).get_d();
}

std::string AlgebraicNumber::to_string() const
{
    if (is_rational()) return ilab::to_string(lo_);
    std::ostringstream os;
    os << "root of " << minpoly_.to_string() << " in (" << ilab::to_string(lo_) << ", " << ilab::to_string(hi_) << ")";
    return os.str();
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b)
{
    if (a.is_rational() != b.is_rational()) return false;
    if (a.is_rational()) return a.lo_ == b.lo_;
    const Rational lo = std::max(a.lo_, b.lo_);
    const Rational hi = std::min(a.hi_, b.hi_);
    if (!(lo < hi)) return false;
    UPoly g = gcd(a.minpoly_, b.minpoly_);
    if (g.degree() < 1) return false;
    // g divides both minpolys, so a root of g in the overlap is the root
    // isolated by each interval.
    return sturm_root_count(g, lo, hi) > 0;
}

int compare(const AlgebraicNumber& a, const AlgebraicNumber& b)
{
    if (a.is_rational() && b.is_rational()) return sgn(Rational(a.lo_ - b.lo_));
    if (a == b) return 0;
    AlgebraicNumber x = a, y = b;
    for (int steps = 1;; ++steps) {
        if (x.hi_ < y.lo_) return -1;
        if (y.hi_ < x.lo_) return 1;
        if (steps == 6) {
            if (auto t = x.float_bracket()) x = std::move(*t);
            if (auto t = y.float_bracket()) y = std::move(*t);
        }
        x = x.refined();
        y = y.refined();
    }
}

std::vector<AlgebraicNumber> isolate_roots(const UPoly& p)
{
    if (p.is_zero()) throw Error("isolate_roots: zero polynomial");
    UPoly q = squarefree_part(p);
    if (q.degree() < 1) return {};
    if (q.degree() == 1) return {AlgebraicNumber(Rational(-q.coeff(0) / q.coeff(1)))};
    if (q.degree() == 2) return AlgebraicNumber::quadratic_roots(q);
    const Rational bound = cauchy_bound(q);
    auto seq = sturm_sequence(q);
    const int total = sign_variations(seq, -bound) - sign_variations(seq, bound);
    Isolation iso;
    bisect(q, seq, -bound, bound, total, iso);

    std::vector<Rational> rational_roots = iso.exact;
    std::vector<std::pair<Rational, Rational>> irrational;
    for (auto& [lo, hi] : iso.intervals) {
        if (auto r = rational_root_in(q, lo, hi)) {
            rational_roots.push_back(*r);
        } else {
            irrational.emplace_back(lo, hi);
        }
    }
    UPoly reduced = q;
    for (const auto& r : rational_roots) reduced = UPoly::divmod(reduced, linear_minpoly(r)).first;
    reduced = reduced.primitive();

    std::vector<AlgebraicNumber> out;
    for (const auto& r : rational_roots) out.emplace_back(r);
    for (auto& [lo, hi] : irrational) out.push_back(AlgebraicNumber(AlgebraicNumber::Trusted{}, reduced, lo, hi));
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return compare(x, y) < 0; });
    return out;
}

AlgebraicNumber evaluate(const UPoly& g, const AlgebraicNumber& s)
{
    if (s.is_rational()) return AlgebraicNumber(g.eval(s.rational_value()));
    if (g.degree() <= 0) return AlgebraicNumber(g.coeff(0));
    // R(y) = res_t(m(t), y - g(t)) vanishes at y = g(s); degree in y is deg m.
    const UPoly& m = s.minpoly();
    const int deg = m.degree();
    RatVec xs, ys;
    for (int i = 0; i <= deg; ++i) {
        Rational y0 = i;
        xs.push_back(y0);
        ys.push_back(resultant(m, UPoly::constant(y0) - g));
    }
    // Lagrange interpolation.
    UPoly r;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        UPoly basis = UPoly::constant(ys[i]);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            basis = basis * UPoly::linear(-xs[j], 1) * Rational(1 / (xs[i] - xs[j]));
        }
        r += basis;
    }
    auto candidates = isolate_roots(r);
    AlgebraicNumber arg = s;
    while (true) {
        auto [a, b] = interval_eval(g, arg.lo(), arg.hi());
        std::vector<AlgebraicNumber> keep;
        for (auto& c : candidates)
            if (!(c.hi() < a || b < c.lo())) keep.push_back(c);
        if (keep.size() == 1) return keep.front();
        if (keep.empty()) throw Error("evaluate: enclosure lost the value");
        candidates.clear();
        for (auto& c : keep) candidates.push_back(c.refined());
        arg = arg.refined();
    }
}

namespace {

// True when the irrational s is a root of h.
bool root_of(const UPoly& h, const AlgebraicNumber& s)
{
    if (h.is_zero()) return true;
    UPoly common = gcd(s.minpoly(), h);
    return common.degree() > 0 && sturm_root_count(common, s.lo(), s.hi()) > 0;
}

}  // namespace

bool evaluates_to(const UPoly& g, const AlgebraicNumber& s, const AlgebraicNumber& v)
{
    if (s.is_rational()) return AlgebraicNumber(g.eval(s.rational_value())) == v;
    if (v.is_rational()) return root_of(g - UPoly::constant(v.rational_value()), s);
    // g(s) must be a root of v's minpoly; v's interval isolates v among them.
    UPoly mg;
    const RatVec& mc = v.minpoly().coeffs();
    for (auto it = mc.rbegin(); it != mc.rend(); ++it) mg = mg * g + UPoly::constant(*it);
    if (!root_of(mg, s)) return false;
    AlgebraicNumber arg = s;
    while (true) {
        auto [a, b] = interval_eval(g, arg.lo(), arg.hi());
        if (b < v.lo() || v.hi() < a) return false;
        if (v.lo() < a && b < v.hi()) return true;
        arg = arg.refined();
    }
}

Rational separating_rational(const AlgebraicNumber& a, const AlgebraicNumber& b)
{
    AlgebraicNumber x = a, y = b;
    while (!(x.hi() < y.lo())) {
        if (y.hi() < x.lo() || (x.is_rational() && y.is_rational())) throw Error("separating_rational: a >= b");
        x = x.refined();
        y = y.refined();
    }
    return (x.hi() + y.lo()) / 2;
}

int compare(const AlgebraicPoint& a, const AlgebraicPoint& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

}  // namespace ilab
