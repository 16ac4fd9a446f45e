#include "ilab/complexlab.h"

#include "ilab/algebraic.h"
#include "ilab/arrangements.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <sstream>

namespace ilab {

ComplexPoly ComplexPoly::constant(std::size_t nvars, const Complex& c)
{
    ComplexPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

ComplexPoly ComplexPoly::variable(std::size_t nvars, std::size_t i)
{
    if (i >= nvars) throw DimensionMismatch("complex variable index out of range");
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(nvars, e, {Rational(1), Rational(0)});
}

ComplexPoly ComplexPoly::monomial(std::size_t nvars, const Exponent& e, const Complex& c)
{
    ComplexPoly p(nvars);
    p.add_term(e, c);
    return p;
}

ComplexPoly ComplexPoly::univariate(const std::vector<Complex>& coeffs)
{
    ComplexPoly p(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<int>(k)}, coeffs[k]);
    return p;
}

int ComplexPoly::degree() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

void ComplexPoly::add_term(const Exponent& e, const Complex& c)
{
    if (e.size() != nvars_) throw DimensionMismatch("complex term has the wrong number of variables");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (fresh) return;
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

Complex ComplexPoly::eval(const std::vector<Complex>& z) const
{
    if (z.size() != nvars_) throw DimensionMismatch("complex point has the wrong dimension");
    Complex sum{Rational(0), Rational(0)};
    for (const auto& [e, c] : terms_) {
        Complex m = c;
        for (std::size_t k = 0; k < nvars_; ++k)
            for (int j = 0; j < e[k]; ++j) m = m * z[k];
        sum = sum + m;
    }
    return sum;
}

ComplexPoly ComplexPoly::derivative(std::size_t var) const
{
    ComplexPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponent f = e;
        --f[var];
        out.add_term(f, {c.re * e[var], c.im * e[var]});
    }
    return out;
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o)
{
    if (o.nvars_ != nvars_) throw DimensionMismatch("adding complex polynomials over different rings");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b)
{
    ComplexPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, {-c.re, -c.im});
    return out;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b)
{
    if (a.nvars_ != b.nvars_) throw DimensionMismatch("multiplying complex polynomials over different rings");
    ComplexPoly out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Exponent e(a.nvars_);
            for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
            out.add_term(e, ca * cb);
        }
    return out;
}

ComplexPoly ComplexPoly::pow(int k) const
{
    if (k < 0) throw Error("negative power of a complex polynomial");
    ComplexPoly out = constant(nvars_, {Rational(1), Rational(0)});
    for (int j = 0; j < k; ++j) out = out * *this;
    return out;
}

std::string ComplexPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << "(" << ilab::to_string(c.re) << (c.im < 0 ? " - " : " + ") << ilab::to_string(abs(c.im)) << "i)";
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] > 0) os << "*z" << (k + 1) << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
    }
    return os.str();
}

Realified realify(const ComplexPoly& p)
{
    const std::size_t d = p.nvars(), n = 2 * d;
    Realified out{MPoly(n), MPoly(n)};
    for (const auto& [e, c] : p.terms()) {
        MPoly re = MPoly::constant(n, c.re), im = MPoly::constant(n, c.im);
        for (std::size_t k = 0; k < d; ++k) {
            const MPoly x = MPoly::variable(n, 2 * k), y = MPoly::variable(n, 2 * k + 1);
            for (int j = 0; j < e[k]; ++j) {
                MPoly r = re * x - im * y;
                im = re * y + im * x;
                re = std::move(r);
            }
        }
        out.re += re;
        out.im += im;
    }
    return out;
}

namespace {

Rational abs_bound(const Complex& c) { return abs(c.re) + abs(c.im); }
Rational abs_lower(const Complex& c) { return std::max(abs(c.re), abs(c.im)); }

Rational univariate_bound(const ComplexPoly& p)
{
    const int E = p.degree();
    if (E <= 0) return Rational(0);
    Rational lead = 0, worst = 0;
    for (const auto& [e, c] : p.terms()) {
        if (e[0] == E) lead = abs_lower(c);
        else worst = std::max(worst, abs_bound(c));
    }
    return 1 + worst / lead;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a)
    {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void join(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct DoubleTerm {
    double c;
    int a, b;
};

/// Exact sign of f(x, y) with a floating filter.
class SignOracle {
public:
    explicit SignOracle(const MPoly& f) : f_(f)
    {
        for (const auto& [e, c] : f.terms()) terms_.push_back({to_double(c), e[0], e[1]});
    }
    int sign(const Rational& x, const Rational& y, double xd, double yd) const
    {
        double v = 0, mag = 0;
        for (const auto& t : terms_) {
            const double m = t.c * std::pow(xd, t.a) * std::pow(yd, t.b);
            v += m;
            mag += std::abs(m);
        }
        if (std::abs(v) > 1e-10 * mag + 1e-300) return v > 0 ? 1 : -1;
        return f_.sign_at({x, y});
    }

private:
    const MPoly& f_;
    std::vector<DoubleTerm> terms_;
};

/// Zeros of Re P on the circle of radius R and the arcs between them.
struct Boundary {
    std::vector<double> cuts;  // angles in (-pi, pi], ascending
    std::vector<int> signs;    // arc k runs from cuts[k] to cuts[k + 1], the last one wraps

    std::size_t arcs() const { return signs.size(); }
    std::size_t arc_at(double theta) const
    {
        if (cuts.size() <= 1) return 0;
        auto it = std::upper_bound(cuts.begin(), cuts.end(), theta);
        if (it == cuts.begin() || it == cuts.end()) return cuts.size() - 1;
        return static_cast<std::size_t>(it - cuts.begin()) - 1;
    }
    std::size_t sign_changes() const
    {
        if (signs.size() <= 1) return 0;
        std::size_t c = 0;
        for (std::size_t k = 0; k < signs.size(); ++k) c += signs[k] != signs[(k + 1) % signs.size()];
        return c;
    }
};

UPoly power(const UPoly& p, int k)
{
    UPoly out = UPoly::constant(Rational(1));
    for (int j = 0; j < k; ++j) out = out * p;
    return out;
}

// z = R ((1 - t^2) + 2 t i) / (1 + t^2); the numerator of f on the circle
// times (1 + t^2)^E.
Boundary boundary_of(const MPoly& f, const Rational& R)
{
    const int E = f.degree();
    const UPoly one_minus = UPoly({Rational(1), Rational(0), Rational(-1)}) * R;
    const UPoly two_t = UPoly({Rational(0), 2 * R});
    const UPoly one_plus = UPoly({Rational(1), Rational(0), Rational(1)});
    UPoly N;
    for (const auto& [e, c] : f.terms()) N += power(one_minus, e[0]) * power(two_t, e[1]) * power(one_plus, E - e[0] - e[1]) * c;
    if (N.is_zero()) throw Error("Re P vanishes on the whole boundary circle");
    auto roots = isolate_roots(N);
    for (std::size_t k = 0; k + 1 < roots.size(); ++k)
        while (roots[k].hi() >= roots[k + 1].lo()) {
            roots[k] = roots[k].refined();
            roots[k + 1] = roots[k + 1].refined();
        }
    const bool at_infinity = N.degree() < 2 * E;
    Boundary b;
    for (const auto& r : roots) b.cuts.push_back(2 * std::atan(r.approx()));
    if (at_infinity) b.cuts.push_back(M_PI);

    std::vector<Rational> samples;
    if (b.cuts.empty()) {
        samples.push_back(Rational(0));
    } else {
        for (std::size_t k = 0; k + 1 < roots.size(); ++k) samples.push_back((roots[k].hi() + roots[k + 1].lo()) / 2);
        if (at_infinity) {
            if (!roots.empty()) samples.push_back(roots.back().hi() + 1);  // last finite root to t = infinity
            samples.push_back(roots.empty() ? Rational(0) : roots.front().lo() - 1);  // wraps through -infinity
        } else {
            samples.push_back(roots.back().hi() + 1);  // wraps through t = infinity
        }
    }
    for (const auto& t : samples) b.signs.push_back(N.sign_at(t));
    return b;
}

/// Grid union-find of the disk minus Z(f), merged through the boundary arcs.
struct DiskGrid {
    std::size_t count = 0;
    std::size_t fragments = 0;
    /// Class of each boundary arc, renumbered 0..count-1.
    std::vector<std::size_t> arc_class;
};

/// Certifies that a grid edge misses Z(f): the Taylor expansion along the
/// edge, g(s) = sum a_k s^k on [0, 1], has |a_0| > sum_{k>0} |a_k| on every
/// piece of a short bisection, or else Sturm counts no root of g in [0, 1].
class EdgeCheck {
public:
    EdgeCheck(const MPoly& f, const Rational& h) : h_(h), hd_(to_double(h))
    {
        for (std::size_t var = 0; var < 2; ++var) {
            MPoly d = f;
            for (int k = 0; k <= f.degree(); ++k) {
                if (k > 0) d = d.derivative(var) * Rational(1, k);
                exact_[var].push_back(d);
                std::vector<DoubleTerm> t;
                for (const auto& [e, c] : d.terms()) t.push_back({to_double(c), e[0], e[1]});
                approx_[var].push_back(std::move(t));
            }
        }
    }
    bool clear(long i, long j, std::size_t var) const
    {
        const std::size_t n = approx_[var].size();
        std::vector<double> xp(n, 1), yp(n, 1), a;
        a.reserve(n);
        for (std::size_t k = 1; k < n; ++k) {
            xp[k] = xp[k - 1] * static_cast<double>(i) * hd_;
            yp[k] = yp[k - 1] * static_cast<double>(j) * hd_;
        }
        double mag = 0, hk = 1;
        for (std::size_t k = 0; k < n; ++k, hk *= hd_) {
            double v = 0;
            for (const auto& t : approx_[var][k]) {
                const double m = t.c * xp[static_cast<std::size_t>(t.a)] * yp[static_cast<std::size_t>(t.b)] * hk;
                v += m;
                mag += std::abs(m);
            }
            a.push_back(v);
        }
        const int verdict = floating(a, 1e-9 * mag, 4);
        if (verdict != 0) return verdict > 0;
        const RatVec p{Rational(i) * h_, Rational(j) * h_};
        RatVec coeffs;
        Rational hk_exact = 1;
        for (const auto& d : exact_[var]) {
            coeffs.push_back(d.eval(p) * hk_exact);
            hk_exact *= h_;
        }
        return sturm_root_count(UPoly(coeffs), Rational(0), Rational(1)) == 0;
    }

    // 1: no root of sum a_k s^k on [0, 1]; -1: a root for sure; 0: undecided.
    static int floating(const std::vector<double>& a, double err, int depth)
    {
        double rest = 0, at_one = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (k > 0) rest += std::abs(a[k]);
            at_one += a[k];
        }
        if (std::abs(a[0]) - rest > err) return 1;
        if (std::abs(a[0]) > err && std::abs(at_one) > err && (a[0] > 0) != (at_one > 0)) return -1;
        if (depth == 0) return 0;
        // Left half: g(u / 2). Right half: g(1/2 + u / 2).
        std::vector<double> left(a), right(a);
        double scale = 1;
        for (auto& c : left) {
            c *= scale;
            scale /= 2;
        }
        for (std::size_t k = 0; k + 1 < right.size(); ++k)
            for (std::size_t m = right.size() - 1; m > k; --m) right[m - 1] += right[m] / 2;
        scale = 1;
        for (auto& c : right) {
            c *= scale;
            scale /= 2;
        }
        const int l = floating(left, err, depth - 1);
        if (l < 0) return -1;
        const int r = floating(right, err, depth - 1);
        if (r < 0) return -1;
        return l > 0 && r > 0 ? 1 : 0;
    }

private:
    Rational h_;
    double hd_;
    std::vector<MPoly> exact_[2];
    std::vector<std::vector<DoubleTerm>> approx_[2];
};

DiskGrid grid_components(const MPoly& f, const Rational& R, const Rational& h, const Boundary& b)
{
    const Rational q = R / h;
    const Rational Q = q * q;
    const long M = static_cast<long>(std::floor(to_double(q)));
    // Inside: i^2 + j^2 < Q.
    Integer ceilQ = Q.get_num() / Q.get_den();
    if (Rational(ceilQ) < Q) ceilQ += 1;
    const long T = ceilQ.get_si() - 1;
    const long band = std::max<long>(0, M - 2) * std::max<long>(0, M - 2);
    const long W = 2 * M + 1;
    const std::size_t G = static_cast<std::size_t>(W * W);
    std::vector<signed char> s(G, 0);
    SignOracle oracle(f);
    const double hd = to_double(h);
    for (long i = -M; i <= M; ++i)
        for (long j = -M; j <= M; ++j) {
            if (i * i + j * j > T) continue;
            s[static_cast<std::size_t>((i + M) * W + (j + M))] = static_cast<signed char>(
                oracle.sign(Rational(i) * h, Rational(j) * h, static_cast<double>(i) * hd, static_cast<double>(j) * hd));
        }
    const EdgeCheck edges(f, h);
    UnionFind uf(G + b.arcs());
    for (long i = -M; i <= M; ++i)
        for (long j = -M; j <= M; ++j) {
            const std::size_t id = static_cast<std::size_t>((i + M) * W + (j + M));
            if (s[id] == 0) continue;
            if (i < M && s[id + static_cast<std::size_t>(W)] == s[id] && edges.clear(i, j, 0)) uf.join(id, id + static_cast<std::size_t>(W));
            if (j < M && s[id + 1] == s[id] && edges.clear(i, j, 1)) uf.join(id, id + 1);
            if (i * i + j * j >= band) {
                const std::size_t arc = b.arc_at(std::atan2(static_cast<double>(j), static_cast<double>(i)));
                if (b.signs[arc] == s[id]) uf.join(id, G + arc);
            }
        }
    DiskGrid out;
    std::map<std::size_t, std::size_t> renumber;
    for (std::size_t a = 0; a < b.arcs(); ++a) {
        auto [it, fresh] = renumber.emplace(uf.find(G + a), renumber.size());
        out.arc_class.push_back(it->second);
    }
    out.count = renumber.size();
    std::set<std::size_t> loose;
    for (std::size_t id = 0; id < G; ++id)
        if (s[id] != 0 && !renumber.count(uf.find(id))) loose.insert(uf.find(id));
    out.fragments = loose.size();
    return out;
}

void require_univariate(const ComplexPoly& p)
{
    if (p.nvars() != 1) throw DimensionMismatch("complement_components_1d needs a univariate polynomial");
    if (p.is_zero()) throw Error("complement_components_1d: P is zero");
}

}  // namespace

Rational root_radius_bound(const ComplexPoly& p)
{
    require_univariate(p);
    return std::max(univariate_bound(p), univariate_bound(p.derivative(0)));
}

ComponentCount complement_components_1d(const ComplexPoly& p, std::optional<Rational> radius, std::optional<Rational> h)
{
    require_univariate(p);
    ComponentCount c;
    c.degree = p.degree();
    c.root_bound = root_radius_bound(p);
    c.radius = radius.value_or(2 * std::max(c.root_bound, Rational(1)));
    if (c.radius <= 0 || c.radius < c.root_bound)
        throw Error("complement_components_1d: radius " + to_string(c.radius) + " is below the root bound " + to_string(c.root_bound));
    if (h && *h <= 0) throw Error("complement_components_1d: grid step must be positive");
    const MPoly f = realify(p).re;
    if (f.is_zero()) {
        c.stable = true;
        return c;
    }
    if (f.degree() == 0) {
        c.count = 1;
        c.arcs = 1;
        c.stable = true;
        return c;
    }
    const Boundary b = boundary_of(f, c.radius);
    c.arcs = b.arcs();
    c.boundary_sign_changes = b.sign_changes();
    if (h) {
        auto g = grid_components(f, c.radius, *h, b);
        c.h = *h;
        c.refinements = 1;
        c.count = g.count;
        c.interior_fragments = g.fragments;
        return c;
    }
    std::vector<std::size_t> counts;
    for (int k = 4; k <= 9; ++k) {
        const Rational step = c.radius / Rational(1L << k);
        auto g = grid_components(f, c.radius, step, b);
        counts.push_back(g.count);
        c.h = step;
        c.refinements = counts.size();
        c.count = g.count;
        c.interior_fragments = g.fragments;
        const std::size_t m = counts.size();
        c.stable = m >= 3 && counts[m - 1] == counts[m - 2] && counts[m - 2] == counts[m - 3];
        if (c.stable && g.fragments == 0) break;
    }
    return c;
}

namespace {

using cd = std::complex<double>;

struct DoublePoly {
    std::size_t d = 1;
    std::vector<std::pair<Exponent, cd>> terms;

    explicit DoublePoly(const ComplexPoly& p) : d(p.nvars())
    {
        for (const auto& [e, c] : p.terms()) terms.emplace_back(e, cd(to_double(c.re), to_double(c.im)));
    }
    cd eval(const std::vector<cd>& z) const
    {
        cd s = 0;
        for (const auto& [e, c] : terms) {
            cd m = c;
            for (std::size_t k = 0; k < d; ++k)
                for (int j = 0; j < e[k]; ++j) m *= z[k];
            s += m;
        }
        return s;
    }
    // Gradient of Re P as one complex number per variable: conj(dP/dz_k).
    std::vector<cd> grad(const std::vector<cd>& z) const
    {
        std::vector<cd> g(d, 0);
        for (const auto& [e, c] : terms)
            for (std::size_t k = 0; k < d; ++k) {
                if (e[k] == 0) continue;
                cd m = c * static_cast<double>(e[k]);
                for (std::size_t l = 0; l < d; ++l)
                    for (int j = 0; j < e[l] - (l == k ? 1 : 0); ++j) m *= z[l];
                g[k] += m;
            }
        for (auto& x : g) x = std::conj(x);
        return g;
    }
};

double norm_of(const std::vector<cd>& z)
{
    double s = 0;
    for (const auto& x : z) s += std::norm(x);
    return std::sqrt(s);
}

/// Ascend |Re P| from z until |z| >= R. Every step keeps the sign of Re P
/// and increases |Re P|, so the path stays in one complement component.
std::vector<cd> escape(const DoublePoly& P, std::vector<cd> z, double R)
{
    double f = P.eval(z).real();
    const double sgn = f > 0 ? 1 : -1;
    double eta = R / 64;
    for (int it = 0; it < 20000 && norm_of(z) < R; ++it) {
        auto g = P.grad(z);
        double gn = norm_of(g);
        std::vector<cd> dir(z.size());
        if (gn < 1e-300) {
            // Critical point of Re P: step radially outward.
            const double zn = norm_of(z);
            for (std::size_t k = 0; k < z.size(); ++k) dir[k] = zn > 0 ? z[k] / zn : cd(k == 0 ? 1 : 0, 0);
        } else {
            for (std::size_t k = 0; k < z.size(); ++k) dir[k] = sgn * g[k] / gn;
        }
        bool moved = false;
        while (eta > 1e-12 * R) {
            std::vector<cd> next(z.size());
            for (std::size_t k = 0; k < z.size(); ++k) next[k] = z[k] + eta * dir[k];
            const double fn = P.eval(next).real();
            if (fn * sgn > std::abs(f)) {
                z = std::move(next);
                f = fn;
                moved = true;
                eta = std::min(eta * 2, R / 16);
                break;
            }
            eta /= 2;
        }
        if (!moved) break;
    }
    return z;
}

Rational point_bound(const std::vector<RatVec>& X)
{
    Rational m = 0;
    for (const auto& x : X) {
        Rational s = 0;
        for (const auto& c : x) s += abs(c);
        m = std::max(m, s);
    }
    return m;
}

std::vector<Complex> as_complex(const RatVec& x)
{
    std::vector<Complex> z;
    for (std::size_t k = 0; k + 1 < x.size(); k += 2) z.push_back({x[k], x[k + 1]});
    return z;
}

std::vector<cd> as_double(const RatVec& x)
{
    std::vector<cd> z;
    for (std::size_t k = 0; k + 1 < x.size(); k += 2) z.emplace_back(to_double(x[k]), to_double(x[k + 1]));
    return z;
}

std::vector<std::size_t> sorted_loads(const std::vector<std::size_t>& label, std::size_t classes)
{
    std::vector<std::size_t> loads(classes, 0);
    for (auto l : label)
        if (l != static_cast<std::size_t>(-1)) ++loads[l];
    std::sort(loads.rbegin(), loads.rend());
    while (!loads.empty() && loads.back() == 0) loads.pop_back();
    return loads;
}

std::vector<std::size_t> loads_1d(const ComplexPoly& p, const std::vector<RatVec>& X, std::size_t& on_zero)
{
    const MPoly f = realify(p).re;
    on_zero = 0;
    std::vector<std::size_t> label(X.size(), static_cast<std::size_t>(-1));
    if (f.degree() <= 0) {
        if (f.is_zero()) on_zero = X.size();
        else std::fill(label.begin(), label.end(), 0);
        return sorted_loads(label, 1);
    }
    const Rational R = std::max<Rational>(2 * root_radius_bound(p), 2 * point_bound(X) + 2);
    const Boundary b = boundary_of(f, R);
    const DiskGrid g = grid_components(f, R, R / 64, b);
    const DoublePoly P(p);
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (f.sign_at(X[i]) == 0) {
            ++on_zero;
            continue;
        }
        const auto z = escape(P, as_double(X[i]), to_double(R));
        label[i] = g.arc_class[b.arc_at(std::arg(z[0]))];
    }
    return sorted_loads(label, g.count);
}

// Sampling estimate in C^2: points escape to a large sphere and are joined
// when the projected chord between their exits keeps one sign.
std::vector<std::size_t> loads_sampled(const ComplexPoly& p, const std::vector<RatVec>& X, std::size_t& on_zero)
{
    const MPoly f = realify(p).re;
    const DoublePoly P(p);
    Rational scale = 0, lead = 0;
    for (const auto& [e, c] : p.terms()) {
        if (total_degree(e) == p.degree()) lead = std::max(lead, abs_lower(c));
        else scale += abs_bound(c);
    }
    const double R = 4 * (1 + to_double(lead > 0 ? scale / lead : Rational(0))) + 2 * to_double(point_bound(X)) + 2;
    on_zero = 0;
    std::vector<std::vector<cd>> exits(X.size());
    std::vector<int> sgn(X.size(), 0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        sgn[i] = f.sign_at(X[i]);
        if (sgn[i] == 0) {
            ++on_zero;
            continue;
        }
        exits[i] = escape(P, as_double(X[i]), R);
    }
    UnionFind uf(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (sgn[i] == 0) continue;
        for (std::size_t j = i + 1; j < X.size(); ++j) {
            if (sgn[j] != sgn[i] || uf.find(i) == uf.find(j)) continue;
            bool same = true;
            for (int s = 1; s < 32 && same; ++s) {
                const double w = s / 32.0;
                std::vector<cd> z(exits[i].size());
                for (std::size_t k = 0; k < z.size(); ++k) z[k] = (1 - w) * exits[i][k] + w * exits[j][k];
                const double zn = norm_of(z);
                if (zn < 1e-9) {
                    same = false;
                    break;
                }
                for (auto& x : z) x *= R / zn;
                same = P.eval(z).real() * sgn[i] > 0;
            }
            if (same) uf.join(i, j);
        }
    }
    std::map<std::size_t, std::size_t> renumber;
    std::vector<std::size_t> label(X.size(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < X.size(); ++i)
        if (sgn[i] != 0) label[i] = renumber.emplace(uf.find(i), renumber.size()).first->second;
    return sorted_loads(label, renumber.size());
}

Complex rotation(const Rational& t)
{
    const Rational den = 1 + t * t;
    return {(1 - t * t) / den, 2 * t / den};
}

Rational round_to(const Rational& x, long denominator)
{
    const double v = to_double(x) * static_cast<double>(denominator);
    return ratio(std::lround(v), denominator);
}

ComplexPoly random_poly(std::size_t d, int E, Rng& rng)
{
    ComplexPoly p(d);
    for (const auto& e : monomials_up_to(d, E)) p.add_term(e, {Rational(rng.uniform(-5, 5)), Rational(rng.uniform(-5, 5))});
    Exponent top(d, 0);
    top[0] = E;
    if (p.terms().find(top) == p.terms().end()) p.add_term(top, {Rational(1), Rational(0)});
    return p;
}

}  // namespace

std::vector<std::size_t> component_loads(const ComplexPoly& p, const std::vector<RatVec>& X, std::size_t* on_zero)
{
    for (const auto& x : X)
        if (x.size() != 2 * p.nvars()) throw DimensionMismatch("points must have 2d real coordinates");
    std::size_t z = 0;
    auto loads = p.nvars() == 1 ? loads_1d(p, X, z) : loads_sampled(p, X, z);
    if (on_zero) *on_zero = z;
    return loads;
}

StressReport conjecture_stress(const std::vector<RatVec>& X, int E, std::size_t trials, std::uint64_t seed)
{
    if (E < 1) throw Error("conjecture_stress: E must be at least 1");
    if (X.empty()) throw Error("conjecture_stress: no points");
    const std::size_t dim = X.front().size();
    if (dim % 2 != 0 || dim == 0) throw DimensionMismatch("conjecture_stress: points need 2d real coordinates");
    for (const auto& x : X)
        if (x.size() != dim) throw DimensionMismatch("conjecture_stress: points of mixed dimension");
    const std::size_t d = dim / 2;
    if (d > 2) throw DimensionMismatch("conjecture_stress supports d = 1 and d = 2");

    StressReport r;
    r.d = d;
    r.E = E;
    r.n = X.size();
    r.trials = trials;
    r.lemma_bound = (X.size() + 2 * static_cast<std::size_t>(E) - 1) / (2 * static_cast<std::size_t>(E));
    r.trivial_regime = static_cast<std::size_t>(E) >= X.size();
    r.heuristic = d == 2;

    Rng rng(seed);
    std::vector<Complex> centroid(d, Complex{Rational(0), Rational(0)});
    for (const auto& x : X) {
        auto z = as_complex(x);
        for (std::size_t k = 0; k < d; ++k) centroid[k] = centroid[k] + z[k];
    }
    for (auto& c : centroid) c = {round_to(c.re / static_cast<long>(X.size()), 64), round_to(c.im / static_cast<long>(X.size()), 64)};

    auto run = [&](const std::string& kind, const ComplexPoly& p) {
        StressTrial t{kind, p, {}, 0, 0};
        t.loads = component_loads(p, X, &t.on_zero_set);
        t.max_load = t.loads.empty() ? 0 : t.loads.front();
        return t;
    };
    auto sector = [&](const Rational& t, const Complex& slope) {
        ComplexPoly l = ComplexPoly::variable(d, 0) - ComplexPoly::constant(d, centroid[0]);
        if (d == 2) l = l + ComplexPoly::monomial(d, {0, 1}, slope) - ComplexPoly::constant(d, slope * centroid[1]);
        return ComplexPoly::constant(d, rotation(t)) * l.pow(E);
    };

    for (std::size_t k = 0; k < trials; ++k) {
        StressTrial t;
        const std::size_t phase = k % 3;
        if (phase == 0) {
            t = run("random", random_poly(d, E, rng));
        } else if (phase == 1 || d == 2 || r.log.empty()) {
            // Best of several rotations of a sector polynomial centred at the centroid.
            const Complex slope{Rational(rng.uniform(-3, 3)), Rational(rng.uniform(1, 3))};
            for (int j = 0; j < 8; ++j) {
                const Rational tt(rng.uniform(-64, 64), 32);
                auto c = run("sector", sector(tt, slope));
                if (j == 0 || c.max_load < t.max_load) t = std::move(c);
            }
        } else {
            t = r.log[r.best];
            t.kind = "optimized";
            for (int step = 0; step < 30; ++step) {
                ComplexPoly q = t.poly;
                const auto monos = monomials_up_to(d, E);
                const auto& e = monos[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(monos.size()) - 1))];
                q.add_term(e, {ratio(rng.uniform(-4, 4), 16), ratio(rng.uniform(-4, 4), 16)});
                if (q.degree() != E) continue;
                auto c = run("optimized", q);
                if (c.max_load <= t.max_load) t = std::move(c);
            }
        }
        const std::size_t reachable = X.size() - t.on_zero_set;
        const std::size_t need = (reachable + 2 * static_cast<std::size_t>(E) - 1) / (2 * static_cast<std::size_t>(E));
        if (d == 1 && t.max_load < need) r.lemma_holds = false;
        r.log.push_back(std::move(t));
        if (r.log.back().max_load < r.log[r.best].max_load) r.best = r.log.size() - 1;
    }
    r.min_max_load = r.log.empty() ? 0 : r.log[r.best].max_load;
    return r;
}

Json to_json(const Complex& c) { return Json::array({to_json(c.re), to_json(c.im)}); }

Json to_json(const ComplexPoly& p)
{
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back(Json::array({e, to_json(c.re), to_json(c.im)}));
    Json j;
    j["nvars"] = p.nvars();
    j["terms"] = std::move(terms);
    return j;
}

ComplexPoly complex_poly_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("nvars") || !j.contains("terms")) throw ParseError("complex polynomial needs nvars and terms");
    if (!j["nvars"].is_number_unsigned()) throw ParseError("nvars must be a non-negative integer");
    ComplexPoly p(j["nvars"].get<std::size_t>());
    for (const auto& t : j["terms"]) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_array()) throw ParseError("complex term must be [exponent, re, im]");
        Exponent e;
        for (const auto& x : t[0]) {
            if (!x.is_number_integer() || x.get<int>() < 0) throw ParseError("exponents must be non-negative integers");
            e.push_back(x.get<int>());
        }
        p.add_term(e, {rational_from_json(t[1]), rational_from_json(t[2])});
    }
    return p;
}

Json to_json(const ComponentCount& c)
{
    Json j;
    j["count"] = c.count;
    j["boundary_sign_changes"] = c.boundary_sign_changes;
    j["arcs"] = c.arcs;
    j["degree"] = c.degree;
    j["radius"] = to_json(c.radius);
    j["root_bound"] = to_json(c.root_bound);
    j["h"] = to_json(c.h);
    j["refinements"] = c.refinements;
    j["interior_fragments"] = c.interior_fragments;
    j["stable"] = c.stable;
    return j;
}

Json to_json(const StressReport& r, bool with_trials)
{
    Json j;
    j["d"] = r.d;
    j["E"] = r.E;
    j["n"] = r.n;
    j["trials"] = r.trials;
    j["min_max_load"] = r.min_max_load;
    j["lemma_bound"] = r.lemma_bound;
    j["lemma_holds"] = r.lemma_holds;
    j["trivial_regime"] = r.trivial_regime;
    j["heuristic"] = r.heuristic;
    if (!r.log.empty()) {
        j["best_kind"] = r.log[r.best].kind;
        j["best_poly"] = to_json(r.log[r.best].poly);
        j["best_loads"] = r.log[r.best].loads;
    }
    if (with_trials) {
        Json ts = Json::array();
        for (const auto& t : r.log) {
            Json x;
            x["kind"] = t.kind;
            x["max_load"] = t.max_load;
            x["on_zero_set"] = t.on_zero_set;
            x["components"] = t.loads.size();
            ts.push_back(std::move(x));
        }
        j["trial_log"] = std::move(ts);
    }
    return j;
}

}  // namespace ilab
