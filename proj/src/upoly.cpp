#include "ilab/upoly.h"

#include <algorithm>
#include <sstream>

namespace ilab {

UPoly::UPoly(RatVec coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UPoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UPoly UPoly::constant(const Rational& c) { return UPoly(RatVec{c}); }

UPoly UPoly::monomial(const Rational& c, int power)
{
    RatVec v(static_cast<std::size_t>(power) + 1);
    v.back() = c;
    return UPoly(std::move(v));
}

UPoly UPoly::identity() { return monomial(1, 1); }

UPoly UPoly::linear(const Rational& a, const Rational& b) { return UPoly(RatVec{a, b}); }

Rational UPoly::coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }

const Rational& UPoly::leading() const
{
    if (coeffs_.empty()) throw Error("leading coefficient of zero polynomial");
    return coeffs_.back();
}

Rational UPoly::eval(const Rational& t) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= t;
        acc += *it;
    }
    return acc;
}

int UPoly::sign_at(const Rational& t) const { return sgn(eval(t)); }

UPoly UPoly::derivative() const
{
    if (coeffs_.size() <= 1) return {};
    RatVec d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
    return UPoly(std::move(d));
}

UPoly UPoly::monic() const
{
    if (is_zero()) return {};
    UPoly r = *this;
    Rational inv = 1 / leading();
    for (auto& c : r.coeffs_) c *= inv;
    return r;
}

UPoly UPoly::primitive() const
{
    if (is_zero()) return {};
    Integer den_lcm = 1;
    for (const auto& c : coeffs_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> ints;
    ints.reserve(coeffs_.size());
    Integer content = 0;
    for (const auto& c : coeffs_) {
        Integer v = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
        ints.push_back(std::move(v));
    }
    if (ints.back() < 0) content = -content;
    RatVec out;
    out.reserve(ints.size());
    for (auto& v : ints) out.emplace_back(Integer(v / content));
    return UPoly(std::move(out));
}

UPoly UPoly::reflected() const
{
    UPoly r = *this;
    for (std::size_t i = 1; i < r.coeffs_.size(); i += 2) r.coeffs_[i] = -r.coeffs_[i];
    return r;
}

UPoly UPoly::operator-() const
{
    UPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

UPoly& UPoly::operator+=(const UPoly& o)
{
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

UPoly& UPoly::operator-=(const UPoly& o)
{
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

UPoly& UPoly::operator*=(const Rational& c)
{
    if (c == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& x : coeffs_) x *= c;
    return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    RatVec r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return UPoly(std::move(r));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b)
{
    if (b.is_zero()) throw Error("polynomial division by zero");
    if (a.degree() < b.degree()) return {UPoly{}, a};
    RatVec rem = a.coeffs_;
    RatVec quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
    const Rational inv_lead = 1 / b.leading();
    const int db = b.degree();
    for (int k = a.degree(); k >= db; --k) {
        Rational factor = rem[static_cast<std::size_t>(k)] * inv_lead;
        if (factor == 0) continue;
        quot[static_cast<std::size_t>(k - db)] = factor;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= factor * b.coeffs_[static_cast<std::size_t>(j)];
    }
    return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

std::string UPoly::to_string(char var) const
{
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        if (a != 1 || i == 0) os << a.get_str();
        if (i >= 1) os << var;
        if (i >= 2) os << "^" << i;
        first = false;
    }
    return os.str();
}

UPoly gcd(const UPoly& a, const UPoly& b)
{
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = UPoly::divmod(x, y).second;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

UPoly squarefree_part(const UPoly& p)
{
    if (p.degree() <= 0) return p.primitive();
    UPoly g = gcd(p, p.derivative());
    return UPoly::divmod(p, g).first.primitive();
}

std::vector<UPoly> sturm_sequence(const UPoly& p)
{
    std::vector<UPoly> seq;
    if (p.is_zero()) return seq;
    seq.push_back(p);
    UPoly d = p.derivative();
    if (d.is_zero()) return seq;
    seq.push_back(d);
    while (true) {
        UPoly r = UPoly::divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.is_zero()) break;
        // Positive rescaling keeps sign variations intact and tames growth.
        Rational scale = abs(r.leading());
        seq.push_back(-(r * (1 / scale)));
    }
    return seq;
}

namespace {

int count_variations(const std::vector<int>& signs)
{
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

}  // namespace

int sign_variations(const std::vector<UPoly>& seq, const Rational& x)
{
    std::vector<int> signs;
    signs.reserve(seq.size());
    for (const auto& p : seq) signs.push_back(p.sign_at(x));
    return count_variations(signs);
}

int sign_variations_at_infinity(const std::vector<UPoly>& seq, bool positive)
{
    std::vector<int> signs;
    signs.reserve(seq.size());
    for (const auto& p : seq) {
        int s = sgn(p.leading());
        if (!positive && p.degree() % 2 == 1) s = -s;
        signs.push_back(s);
    }
    return count_variations(signs);
}

std::size_t sturm_root_count(const UPoly& p, const Rational& lo, const Rational& hi)
{
    if (p.is_zero()) throw Error("sturm_root_count: zero polynomial");
    if (!(lo < hi)) throw Error("sturm_root_count: empty interval");
    UPoly q = squarefree_part(p);
    // Deflate exact endpoint roots; the open-interval count is unchanged.
    if (q.degree() >= 1 && q.eval(lo) == 0) q = UPoly::divmod(q, UPoly::linear(-lo, 1)).first;
    if (q.degree() >= 1 && q.eval(hi) == 0) q = UPoly::divmod(q, UPoly::linear(-hi, 1)).first;
    if (q.degree() <= 0) return 0;
    auto seq = sturm_sequence(q);
    return static_cast<std::size_t>(sign_variations(seq, lo) - sign_variations(seq, hi));
}

std::size_t real_root_count(const UPoly& p)
{
    if (p.is_zero()) throw Error("real_root_count: zero polynomial");
    UPoly q = squarefree_part(p);
    if (q.degree() <= 0) return 0;
    auto seq = sturm_sequence(q);
    return static_cast<std::size_t>(sign_variations_at_infinity(seq, false) - sign_variations_at_infinity(seq, true));
}

Rational cauchy_bound(const UPoly& p)
{
    if (p.degree() < 1) return 1;
    Rational m = 0;
    const Rational& lead = p.leading();
    for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeffs()[static_cast<std::size_t>(i)] / lead)));
    return m + 1;
}

std::pair<Rational, Rational> interval_eval(const UPoly& p, const Rational& lo, const Rational& hi)
{
    Rational a = 0, b = 0;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
        Rational c1 = a * lo, c2 = a * hi, c3 = b * lo, c4 = b * hi;
        a = std::min({c1, c2, c3, c4}) + *it;
        b = std::max({c1, c2, c3, c4}) + *it;
    }
    return {a, b};
}

Rational resultant(const UPoly& p, const UPoly& q)
{
    if (p.is_zero() || q.is_zero()) throw Error("resultant of zero polynomial");
    const int m = p.degree(), n = q.degree();
    const int size = m + n;
    if (size == 0) throw Error("resultant: both inputs constant in the eliminated variable");
    std::vector<RatVec> a(static_cast<std::size_t>(size), RatVec(static_cast<std::size_t>(size)));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = p.coeff(static_cast<std::size_t>(m - k));
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) a[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + k)] = q.coeff(static_cast<std::size_t>(n - k));
    Rational det = 1;
    const auto N = static_cast<std::size_t>(size);
    for (std::size_t c = 0; c < N; ++c) {
        std::size_t piv = c;
        while (piv < N && a[piv][c] == 0) ++piv;
        if (piv == N) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < N; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < N; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

}  // namespace ilab
