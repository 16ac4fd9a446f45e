#include "ilab/mpoly.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ilab {

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

bool GradedLess::operator()(const Exponent& a, const Exponent& b) const
{
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return b < a;
}

MPoly MPoly::constant(std::size_t nvars, const Rational& c)
{
    MPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

MPoly MPoly::variable(std::size_t nvars, std::size_t i)
{
    if (i >= nvars) throw DimensionMismatch("variable index out of range");
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(nvars, e, 1);
}

MPoly MPoly::monomial(std::size_t nvars, const Exponent& e, const Rational& c)
{
    if (e.size() != nvars) throw DimensionMismatch("exponent length differs from variable count");
    MPoly p(nvars);
    p.add_term(e, c);
    return p;
}

MPoly MPoly::from_upoly(const UPoly& u, std::size_t nvars, std::size_t var)
{
    if (var >= nvars) throw DimensionMismatch("variable index out of range");
    MPoly p(nvars);
    for (int k = 0; k <= u.degree(); ++k) {
        Exponent e(nvars, 0);
        e[var] = k;
        p.add_term(e, u.coeff(static_cast<std::size_t>(k)));
    }
    return p;
}

MPoly MPoly::affine(const RatVec& coeffs)
{
    if (coeffs.empty()) throw DimensionMismatch("affine form needs a constant term");
    const std::size_t n = coeffs.size() - 1;
    MPoly p = constant(n, coeffs[0]);
    for (std::size_t i = 0; i < n; ++i) p += variable(n, i) * coeffs[i + 1];
    return p;
}

int MPoly::degree() const
{
    if (terms_.empty()) return -1;
    return total_degree(terms_.rbegin()->first);
}

int MPoly::degree_in(std::size_t var) const
{
    if (terms_.empty()) return -1;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

Rational MPoly::coeff(const Exponent& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

const std::pair<const Exponent, Rational>& MPoly::leading_term() const
{
    if (terms_.empty()) throw Error("leading term of zero polynomial");
    Exponent top(nvars_, 0);
    if (nvars_ > 0) top[0] = degree();
    return *terms_.lower_bound(top);
}

void MPoly::add_term(const Exponent& e, const Rational& c)
{
    if (c == 0) return;
    if (e.size() != nvars_) throw DimensionMismatch("exponent length differs from variable count");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

namespace {

// powers[i][k] = x_i^k for k up to the needed degree.
template <class T>
std::vector<std::vector<T>> power_table(const std::vector<T>& x, const std::vector<int>& maxdeg, const T& one)
{
    std::vector<std::vector<T>> pw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        pw[i].push_back(one);
        for (int k = 1; k <= maxdeg[i]; ++k) pw[i].push_back(pw[i].back() * x[i]);
    }
    return pw;
}

std::vector<int> max_degrees(const MPoly& p)
{
    std::vector<int> m(p.nvars(), 0);
    for (const auto& [e, c] : p.terms())
        for (std::size_t i = 0; i < e.size(); ++i) m[i] = std::max(m[i], e[i]);
    return m;
}

}  // namespace

Rational MPoly::eval(const RatVec& x) const
{
    if (x.size() != nvars_) throw DimensionMismatch("point dimension differs from variable count");
    auto pw = power_table<Rational>(x, max_degrees(*this), Rational(1));
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i]) t *= pw[i][static_cast<std::size_t>(e[i])];
        acc += t;
    }
    return acc;
}

int MPoly::sign_at(const RatVec& x) const { return sgn(eval(x)); }

MPoly MPoly::derivative(std::size_t var) const
{
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponent f = e;
        --f[var];
        r.add_term(f, c * e[var]);
    }
    return r;
}

MPoly MPoly::operator-() const
{
    MPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MPoly& MPoly::operator+=(const MPoly& o)
{
    if (o.nvars_ != nvars_) throw DimensionMismatch("adding polynomials over different rings");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o)
{
    if (o.nvars_ != nvars_) throw DimensionMismatch("subtracting polynomials over different rings");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MPoly& MPoly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b)
{
    if (a.nvars_ != b.nvars_) throw DimensionMismatch("multiplying polynomials over different rings");
    MPoly r(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MPoly MPoly::pow(int k) const
{
    MPoly r = constant(nvars_, 1), base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return r;
}

MPoly MPoly::compose(const std::vector<MPoly>& images) const
{
    if (images.size() != nvars_) throw DimensionMismatch("composition needs one image per variable");
    if (images.empty()) return *this;
    const std::size_t m = images.front().nvars();
    for (const auto& im : images)
        if (im.nvars() != m) throw DimensionMismatch("composition images over different rings");
    auto pw = power_table<MPoly>(images, max_degrees(*this), constant(m, 1));
    MPoly acc(m);
    for (const auto& [e, c] : terms_) {
        MPoly t = constant(m, c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i]) t = t * pw[i][static_cast<std::size_t>(e[i])];
        acc += t;
    }
    return acc;
}

UPoly MPoly::compose(const std::vector<UPoly>& curve) const
{
    if (curve.size() != nvars_) throw DimensionMismatch("curve dimension differs from variable count");
    auto pw = power_table<UPoly>(curve, max_degrees(*this), UPoly::constant(1));
    UPoly acc;
    for (const auto& [e, c] : terms_) {
        UPoly t = UPoly::constant(c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i]) t = t * pw[i][static_cast<std::size_t>(e[i])];
        acc += t;
    }
    return acc;
}

MPoly MPoly::substitute(std::size_t var, const Rational& value) const
{
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        Exponent f = e;
        Rational v = c;
        for (int k = 0; k < e[var]; ++k) v *= value;
        f[var] = 0;
        r.add_term(f, v);
    }
    return r;
}

UPoly MPoly::to_upoly(std::size_t var) const
{
    RatVec c(static_cast<std::size_t>(std::max(0, degree_in(var)) + 1));
    for (const auto& [e, v] : terms_) {
        for (std::size_t i = 0; i < nvars_; ++i)
            if (i != var && e[i] != 0) throw Error("to_upoly: polynomial depends on another variable");
        c[static_cast<std::size_t>(e[var])] = v;
    }
    return UPoly(std::move(c));
}

std::vector<MPoly> MPoly::coefficients_in(std::size_t var) const
{
    std::vector<MPoly> out(static_cast<std::size_t>(std::max(0, degree_in(var)) + 1), MPoly(nvars_));
    for (const auto& [e, c] : terms_) {
        Exponent f = e;
        f[var] = 0;
        out[static_cast<std::size_t>(e[var])].add_term(f, c);
    }
    return out;
}

MPoly MPoly::monic() const
{
    if (is_zero()) return *this;
    return *this * Rational(1 / leading_term().second);
}

MPoly MPoly::primitive() const
{
    if (is_zero()) return *this;
    Integer den_lcm = 1, content = 0;
    for (const auto& [e, c] : terms_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& [e, c] : terms_) {
        Integer v = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    }
    Rational scale(den_lcm, content);
    scale.canonicalize();
    if (leading_term().second < 0) scale = -scale;
    return *this * scale;
}

std::optional<MPoly> MPoly::divide_exact(const MPoly& a, const MPoly& b)
{
    if (b.is_zero()) throw Error("polynomial division by zero");
    if (a.nvars_ != b.nvars_) throw DimensionMismatch("dividing polynomials over different rings");
    MPoly rem = a, quot(a.nvars_);
    const auto& [lb, cb] = b.leading_term();
    while (!rem.is_zero()) {
        const auto& [lr, cr] = rem.leading_term();
        Exponent e(a.nvars_);
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = lr[i] - lb[i];
            if (e[i] < 0) return std::nullopt;
        }
        MPoly t = monomial(a.nvars_, e, cr / cb);
        quot += t;
        rem -= t * b;
    }
    return quot;
}

std::string MPoly::to_string() const
{
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        const bool constant_term = total_degree(e) == 0;
        if (a != 1 || constant_term) os << a.get_str();
        bool need_star = a != 1 && !constant_term;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            need_star = true;
        }
        first = false;
    }
    return os.str();
}

MPoly resultant(const MPoly& p, const MPoly& q, std::size_t var)
{
    if (p.is_zero() || q.is_zero()) throw Error("resultant of zero polynomial");
    const auto pc = p.coefficients_in(var), qc = q.coefficients_in(var);
    const int m = static_cast<int>(pc.size()) - 1, n = static_cast<int>(qc.size()) - 1;
    const int size = m + n;
    if (size == 0) throw Error("resultant: both inputs constant in the eliminated variable");
    const std::size_t N = static_cast<std::size_t>(size);
    std::vector<std::vector<MPoly>> a(N, std::vector<MPoly>(N, MPoly(p.nvars())));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = pc[static_cast<std::size_t>(m - k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) a[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + k)] = qc[static_cast<std::size_t>(n - k)];

    // Bareiss elimination; every division below is exact.
    MPoly prev = MPoly::constant(p.nvars(), 1);
    int sign = 1;
    for (std::size_t c = 0; c + 1 < N; ++c) {
        std::size_t piv = c;
        while (piv < N && a[piv][c].is_zero()) ++piv;
        if (piv == N) return MPoly(p.nvars());
        if (piv != c) {
            std::swap(a[piv], a[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < N; ++r) {
            for (std::size_t k = c + 1; k < N; ++k) {
                MPoly num = a[c][c] * a[r][k] - a[r][c] * a[c][k];
                auto quot = MPoly::divide_exact(num, prev);
                if (!quot) throw Error("resultant: inexact Bareiss step");
                a[r][k] = std::move(*quot);
            }
            a[r][c] = MPoly(p.nvars());
        }
        prev = a[c][c];
    }
    MPoly det = a[N - 1][N - 1];
    return sign < 0 ? -det : det;
}

std::vector<Exponent> monomials_up_to(std::size_t nvars, int max_degree, int min_degree)
{
    std::vector<Exponent> out;
    Exponent e(nvars, 0);
    // Enumerate exponents of one degree in lex-descending order.
    auto emit = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 == nvars) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
        e[i] = 0;
    };
    for (int d = std::max(0, min_degree); d <= max_degree; ++d) {
        if (nvars == 0) {
            if (d == 0) out.push_back(e);
            continue;
        }
        emit(emit, 0, d);
    }
    return out;
}

RatVec monomial_values(const std::vector<Exponent>& monomials, const RatVec& x)
{
    std::vector<int> maxdeg(x.size(), 0);
    for (const auto& e : monomials)
        for (std::size_t i = 0; i < x.size(); ++i) maxdeg[i] = std::max(maxdeg[i], e[i]);
    auto pw = power_table<Rational>(x, maxdeg, Rational(1));
    RatVec out;
    out.reserve(monomials.size());
    for (const auto& e : monomials) {
        Rational v = 1;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (e[i]) v *= pw[i][static_cast<std::size_t>(e[i])];
        out.push_back(std::move(v));
    }
    return out;
}

RatVec veronese_lift(const RatVec& x, int e)
{
    if (e < 1) throw Error("veronese_lift: degree must be at least 1");
    return monomial_values(monomials_up_to(x.size(), e, 1), x);
}

}  // namespace ilab
