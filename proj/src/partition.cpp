#include "ilab/partition.h"

#include "ilab/arrangements.h"
#include "ilab/linalg.h"
#include "ilab/parallel.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ilab {

namespace {

std::size_t lifted_dim(std::size_t dprime, int e) { return monomials_up_to(dprime, e, 1).size(); }

RatVec leading(const RatVec& x, std::size_t dprime) { return RatVec(x.begin(), x.begin() + dprime); }

struct Fit {
    MPoly factor;
    Rational worst_ratio;
    bool perfect = false;
};

// Solves the small dense system a y = b in doubles; false when singular.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double>& b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-300) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = 0; c < n; ++c) b[c] /= a[c][c];
    return true;
}

// Moves w to the nearest vector with <row_c, w> = 0 for every row.
bool project_double(std::vector<double>& w, const std::vector<std::vector<double>>& rows)
{
    const std::size_t k = rows.size();
    std::vector<std::vector<double>> gram(k, std::vector<double>(k));
    std::vector<double> rhs(k);
    double trace = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0;
            for (std::size_t t = 0; t < w.size(); ++t) s += rows[i][t] * rows[j][t];
            gram[i][j] = s;
        }
        trace += gram[i][i];
        double s = 0;
        for (std::size_t t = 0; t < w.size(); ++t) s += rows[i][t] * w[t];
        rhs[i] = s;
    }
    for (std::size_t i = 0; i < k; ++i) gram[i][i] += 1e-12 * trace / static_cast<double>(k);
    if (!solve_dense(gram, rhs)) return false;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t t = 0; t < w.size(); ++t) w[t] -= rhs[i] * rows[i][t];
    double norm = 0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0) || !std::isfinite(norm)) return false;
    for (double& x : w) x /= norm;
    return true;
}

// Exact counterpart of project_double: the result vanishes on every row.
std::optional<RatVec> project_exact(const RatVec& w, const std::vector<RatVec>& rows)
{
    const std::size_t k = rows.size();
    RatMatrix gram(k, RatVec(k));
    RatVec rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(rows[i], rows[j]);
        rhs[i] = dot(rows[i], w);
    }
    auto y = solve(gram, rhs, k);
    if (!y) return std::nullopt;
    RatVec out = w;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t t = 0; t < w.size(); ++t) out[t] -= (*y)[i] * rows[i][t];
    return out;
}

// Fits one degree-e factor that bisects each class. Samples are points of
// R^dim; only their first dprime coordinates enter the lift.
class HalvingFitter {
public:
    HalvingFitter(const std::vector<RatVec>& samples, const std::vector<std::vector<std::size_t>>& classes,
                  std::size_t dim, std::size_t dprime, int e)
        : classes_(classes), dim_(dim), dprime_(dprime), monos_(monomials_up_to(dprime, e, 1))
    {
        const std::size_t D = monos_.size();
        for (const auto& c : classes_)
            for (auto i : c) exact_.emplace(i, monomial_values(monos_, leading(samples[i], dprime_)));
        mean_.assign(D, 0);
        scale_.assign(D, 0);
        for (const auto& [i, v] : exact_) {
            std::vector<double> z(D);
            for (std::size_t j = 0; j < D; ++j) z[j] = v[j].get_d();
            for (std::size_t j = 0; j < D; ++j) mean_[j] += z[j];
            lifted_.emplace(i, std::move(z));
        }
        const double m = static_cast<double>(exact_.size());
        for (auto& x : mean_) x /= m;
        for (const auto& [i, z] : lifted_)
            for (std::size_t j = 0; j < D; ++j) scale_[j] += (z[j] - mean_[j]) * (z[j] - mean_[j]);
        for (auto& s : scale_) s = s > 0 ? std::sqrt(s / m) : 1.0;
        for (auto& [i, z] : lifted_)
            for (std::size_t j = 0; j < D; ++j) z[j] = (z[j] - mean_[j]) / scale_[j];
    }

    // Up to `want` distinct fits that split every class evenly; when none
    // does, the least unbalanced fit within the tolerance.
    std::vector<Fit> run(const PartitionConfig& cfg, Rng& rng, std::size_t want)
    {
        std::vector<Fit> perfect;
        std::optional<Fit> best;
        const std::size_t D = monos_.size();
        for (int restart = 0; restart < cfg.max_restarts && perfect.size() < want; ++restart) {
            std::vector<double> w(D + 1);
            for (auto& x : w) x = static_cast<double>(rng.uniform(-1000, 1000)) / 1000.0;
            w[D] = 0;
            for (int iter = 0; iter < cfg.max_iterations; ++iter) {
                std::vector<std::size_t> medians;
                bool balanced = true;
                for (const auto& c : classes_) {
                    std::vector<std::pair<double, std::size_t>> vals;
                    vals.reserve(c.size());
                    for (auto i : c) vals.emplace_back(value(w, i), i);
                    const std::size_t mid = (vals.size() - 1) / 2;
                    std::nth_element(vals.begin(), vals.begin() + static_cast<long>(mid), vals.end());
                    medians.push_back(vals[mid].second);
                    std::size_t pos = 0, neg = 0;
                    for (const auto& [v, i] : vals) {
                        if (i == vals[mid].second) continue;
                        (v > 0 ? pos : neg) += 1;
                    }
                    if (std::max(pos, neg) > c.size() / 2) balanced = false;
                }
                if (balanced || iter + 1 == cfg.max_iterations) {
                    if (auto fit = exact_fit(w, medians)) {
                        if (fit->perfect) {
                            const bool seen = std::any_of(perfect.begin(), perfect.end(),
                                                          [&](const Fit& f) { return f.factor == fit->factor; });
                            if (!seen) perfect.push_back(*fit);
                        } else if (!best || fit->worst_ratio < best->worst_ratio) {
                            best = fit;
                        }
                    }
                    if (balanced) break;
                }
                std::vector<std::vector<double>> rows;
                for (auto i : medians) {
                    std::vector<double> r = lifted_.at(i);
                    r.push_back(1.0);
                    rows.push_back(std::move(r));
                }
                if (!project_double(w, rows)) break;
            }
        }
        if (!perfect.empty()) return perfect;
        if (best && best->worst_ratio <= Rational(1, 2) + cfg.delta) return {*best};
        return {};
    }

private:
    double value(const std::vector<double>& w, std::size_t i) const
    {
        const auto& z = lifted_.at(i);
        double s = w.back();
        for (std::size_t j = 0; j < z.size(); ++j) s += w[j] * z[j];
        return s;
    }

    // Rounded hyperplane first; if it does not split every class evenly, the
    // exact projection through the medians (larger coefficients) competes.
    std::optional<Fit> exact_fit(const std::vector<double>& w, const std::vector<std::size_t>& medians) const
    {
        const std::size_t D = monos_.size();
        std::vector<double> raw(D + 1);
        raw[D] = w[D];
        for (std::size_t j = 0; j < D; ++j) {
            raw[j] = w[j] / scale_[j];
            raw[D] -= w[j] * mean_[j] / scale_[j];
        }
        double top = 0;
        for (double x : raw) top = std::max(top, std::abs(x));
        if (!(top > 0) || !std::isfinite(top)) return std::nullopt;
        RatVec coef(D + 1);
        for (std::size_t j = 0; j <= D; ++j)
            coef[j] = Rational(Integer(static_cast<long>(std::llround(raw[j] / top * 16777216.0))), Integer(16777216));
        for (auto& c : coef) c.canonicalize();

        std::optional<Fit> best = evaluate_fit(coef);
        if (best && best->perfect) return best;
        std::vector<RatVec> rows;
        for (auto i : medians) {
            RatVec r = exact_.at(i);
            r.push_back(Rational(1));
            rows.push_back(std::move(r));
        }
        if (auto projected = project_exact(coef, rows)) {
            auto fit = evaluate_fit(*projected);
            if (fit && (!best || fit->worst_ratio < best->worst_ratio)) best = fit;
        }
        return best;
    }

    std::optional<Fit> evaluate_fit(const RatVec& coef) const
    {
        const std::size_t D = monos_.size();
        MPoly f(dim_);
        for (std::size_t j = 0; j < D; ++j) {
            Exponent e(dim_, 0);
            std::copy(monos_[j].begin(), monos_[j].end(), e.begin());
            f.add_term(e, coef[j]);
        }
        f.add_term(Exponent(dim_, 0), coef[D]);
        if (f.degree() < 1) return std::nullopt;
        f = f.primitive();
        Fit fit{f, Rational(0), true};
        for (const auto& c : classes_) {
            std::size_t pos = 0, neg = 0;
            for (auto i : c) {
                const int s = sgn(dot_affine(f, i));
                if (s > 0) ++pos;
                if (s < 0) ++neg;
            }
            const std::size_t side = std::max(pos, neg);
            fit.worst_ratio = std::max(fit.worst_ratio, ratio(static_cast<long>(side), static_cast<long>(c.size())));
            if (side > (c.size() + 1) / 2) fit.perfect = false;
        }
        fit.worst_ratio.canonicalize();
        return fit;
    }

    Rational dot_affine(const MPoly& f, std::size_t i) const
    {
        const RatVec& v = exact_.at(i);
        Rational s = 0;
        for (std::size_t j = 0; j < monos_.size(); ++j) {
            Exponent e(dim_, 0);
            std::copy(monos_[j].begin(), monos_[j].end(), e.begin());
            s += f.coeff(e) * v[j];
        }
        return s + f.coeff(Exponent(dim_, 0));
    }

    const std::vector<std::vector<std::size_t>>& classes_;
    std::size_t dim_, dprime_;
    std::vector<Exponent> monos_;
    std::map<std::size_t, RatVec> exact_;
    std::map<std::size_t, std::vector<double>> lifted_;
    std::vector<double> mean_, scale_;
};

// Chooses the next step: degree and the classes (largest first) to bisect.
struct StepPlan {
    int degree = 0;
    std::vector<std::vector<std::size_t>> classes;
    std::size_t nonempty = 0;
};

std::optional<StepPlan> plan_step(const std::map<Cell, std::vector<std::size_t>>& cells, std::size_t dprime,
                                  int remaining, DegreeSchedule schedule)
{
    if (remaining < 1) return std::nullopt;
    std::vector<const std::vector<std::size_t>*> splittable;
    for (const auto& [cell, members] : cells)
        if (members.size() >= 2) splittable.push_back(&members);
    if (splittable.empty()) return std::nullopt;
    std::stable_sort(splittable.begin(), splittable.end(), [](auto a, auto b) { return a->size() > b->size(); });
    StepPlan plan;
    plan.nonempty = cells.size();
    int e = 1;
    while (schedule == DegreeSchedule::Greedy && lifted_dim(dprime, e) < splittable.size() && e < remaining) ++e;
    plan.degree = e;
    const std::size_t k = std::min(splittable.size(), lifted_dim(dprime, e));
    for (std::size_t i = 0; i < k; ++i) plan.classes.push_back(*splittable[i]);
    return plan;
}

std::vector<Fit> fit_or_throw(const std::vector<RatVec>& samples, const StepPlan& plan, std::size_t dim,
                              std::size_t dprime, const PartitionConfig& cfg, Rng& rng, std::size_t want)
{
    HalvingFitter fitter(samples, plan.classes, dim, dprime, plan.degree);
    auto fits = fitter.run(cfg, rng, want);
    if (fits.empty()) throw Error("partition: no halving polynomial within the imbalance tolerance");
    return fits;
}

void accept(PartitionPoly& out, const StepPlan& plan, const Fit& fit)
{
    out.factors.push_back(fit.factor);
    out.total_degree += plan.degree;
    out.log.push_back({plan.degree, plan.nonempty, plan.classes.size(), fit.worst_ratio});
}

std::size_t candidate_count(const PartitionConfig& cfg) { return static_cast<std::size_t>(std::max(1, cfg.candidates)); }

void check_degree(int E)
{
    if (E < 1) throw Error("partition: degree budget E must be at least 1");
}

std::vector<AlgebraicNumber> roots_inside(const UPoly& h, const std::pair<Rational, Rational>& range)
{
    std::vector<AlgebraicNumber> out;
    const AlgebraicNumber lo(range.first), hi(range.second);
    for (auto& r : isolate_roots(h))
        if (compare(lo, r) < 0 && compare(r, hi) < 0) out.push_back(std::move(r));
    return out;
}

// Midpoint of a coarse enclosure; enough to rank interval widths.
double rough(const AlgebraicNumber& a)
{
    if (a.is_rational()) return a.rational_value().get_d();
    const AlgebraicNumber r = a.refined_to(Rational(1, 1 << 20));
    return Rational((r.lo() + r.hi()) / 2).get_d();
}

// A rational strictly inside (a, b).
Rational inner_point(const AlgebraicNumber& a, const AlgebraicNumber& b)
{
    if (a.is_rational() && b.is_rational()) return (a.rational_value() + b.rational_value()) / 2;
    return separating_rational(a, b);
}

// Breakpoints of gamma against the factors inside the range, sorted and distinct.
std::vector<AlgebraicNumber> breakpoints(const std::vector<UPoly>& composed, const std::pair<Rational, Rational>& range)
{
    std::vector<AlgebraicNumber> pts;
    for (const auto& h : composed) {
        auto r = roots_inside(h, range);
        pts.insert(pts.end(), r.begin(), r.end());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.insert(pts.begin(), AlgebraicNumber(range.first));
    pts.push_back(AlgebraicNumber(range.second));
    return pts;
}

std::string cell_string(const Cell& c)
{
    std::string s;
    for (int x : c) s += x > 0 ? '+' : '-';
    return s;
}

}  // namespace

PartitionPoly partition_points(const std::vector<RatVec>& points, int E, std::size_t dprime, const PartitionConfig& cfg)
{
    check_degree(E);
    if (points.empty()) throw Error("partition_points: empty point set");
    const std::size_t dim = points.front().size();
    if (dprime < 1 || dprime > dim) throw Error("partition_points: dprime must lie in [1, d]");
    for (const auto& p : points)
        if (p.size() != dim) throw DimensionMismatch("partition_points: points of mixed dimension");

    PartitionPoly out;
    out.dim = dim;
    out.dprime = dprime;
    out.imbalance_delta = cfg.delta;
    Rng rng(cfg.seed);
    std::map<Cell, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < points.size(); ++i) cells[{}].push_back(i);
    while (auto plan = plan_step(cells, dprime, E - out.total_degree, cfg.schedule)) {
        const auto fits = fit_or_throw(points, *plan, dim, dprime, cfg, rng, candidate_count(cfg));
        // Keep the candidate leaving the fullest class smallest.
        std::size_t chosen = 0, chosen_load = SIZE_MAX;
        for (std::size_t k = 0; k < fits.size(); ++k) {
            std::map<std::pair<Cell, int>, std::size_t> loads;
            std::size_t load = 0;
            for (const auto& [cell, members] : cells)
                for (auto i : members) load = std::max(load, ++loads[{cell, fits[k].factor.sign_at(points[i])}]);
            if (load < chosen_load) {
                chosen_load = load;
                chosen = k;
            }
        }
        accept(out, *plan, fits[chosen]);
        const MPoly& f = fits[chosen].factor;
        std::map<Cell, std::vector<std::size_t>> next;
        for (const auto& [cell, members] : cells) {
            for (auto i : members) {
                const int s = f.sign_at(points[i]);
                if (s == 0) continue;
                Cell c = cell;
                c.push_back(s);
                next[c].push_back(i);
            }
        }
        cells = std::move(next);
    }
    return out;
}

Box arrangement_box(const std::vector<ParamCurve>& curves)
{
    Box box;
    for (const auto& c : curves) {
        RatVec x;
        if (c.is_line()) {
            const RatVec p = c.base_point(), v = c.direction();
            const Rational s = dot(p, v) / dot(v, v);
            x = p;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] -= s * v[i];
        } else {
            x = c.point_at(0);
        }
        if (box.lo.empty()) {
            box.lo = box.hi = x;
            continue;
        }
        if (x.size() != box.lo.size()) throw DimensionMismatch("arrangement_box: curves of mixed dimension");
        for (std::size_t i = 0; i < x.size(); ++i) {
            box.lo[i] = std::min(box.lo[i], x[i]);
            box.hi[i] = std::max(box.hi[i], x[i]);
        }
    }
    for (auto& x : box.lo) x -= 1;
    for (auto& x : box.hi) x += 1;
    return box;
}

std::optional<std::pair<Rational, Rational>> clip_to_box(const ParamCurve& gamma, const Box& box)
{
    const auto& comps = gamma.components();
    if (box.lo.size() != comps.size() || box.hi.size() != comps.size())
        throw DimensionMismatch("clip_to_box: box dimension");
    std::vector<AlgebraicNumber> pts;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].degree() < 1) {
            const Rational c = comps[i].coeff(0);
            if (c < box.lo[i] || box.hi[i] < c) return std::nullopt;
            continue;
        }
        for (const Rational& bound : {box.lo[i], box.hi[i]}) {
            auto r = isolate_roots(comps[i] - UPoly::constant(bound));
            pts.insert(pts.end(), r.begin(), r.end());
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    // Some coordinate is unbounded, so only the bounded gaps can lie inside.
    auto inside = [&](const Rational& t) {
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const Rational v = comps[i].eval(t);
            if (v < box.lo[i] || box.hi[i] < v) return false;
        }
        return true;
    };
    std::optional<std::size_t> first, last;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (!inside(inner_point(pts[k], pts[k + 1]))) continue;
        if (!first) first = k;
        last = k + 1;
    }
    if (!first) return std::nullopt;
    return std::make_pair(pts[*first].lo(), pts[*last].hi());
}

namespace {

// Exact cut data of one curve against the factors accepted so far.
struct CurveState {
    std::pair<Rational, Rational> window;
    std::vector<UPoly> composed;
    std::vector<AlgebraicNumber> cuts;
    bool active = true;
};

std::vector<AlgebraicNumber> merged_cuts(const std::vector<AlgebraicNumber>& a, const std::vector<AlgebraicNumber>& b)
{
    std::vector<AlgebraicNumber> out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Cells of one curve once h joins its composed factors; empty when h vanishes on it.
std::set<Cell> trace_with(const CurveState& st, const UPoly& h, const std::vector<AlgebraicNumber>& roots)
{
    std::set<Cell> cells;
    if (h.is_zero()) return cells;
    std::vector<AlgebraicNumber> pts = merged_cuts(st.cuts, roots);
    pts.insert(pts.begin(), AlgebraicNumber(st.window.first));
    pts.push_back(AlgebraicNumber(st.window.second));
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Rational t = inner_point(pts[k], pts[k + 1]);
        Cell c;
        for (const auto& g : st.composed) c.push_back(g.sign_at(t));
        c.push_back(h.sign_at(t));
        cells.insert(std::move(c));
    }
    return cells;
}

}  // namespace

PartitionPoly partition_curves(const std::vector<ParamCurve>& curves, int E, const PartitionConfig& cfg,
                               std::optional<Box> box)
{
    check_degree(E);
    PartitionPoly out;
    if (curves.empty()) return out;
    const std::size_t dim = curves.front().dim();
    for (const auto& c : curves)
        if (c.dim() != dim) throw DimensionMismatch("partition_curves: curves of mixed dimension");
    out.window = box ? *box : arrangement_box(curves);
    out.dim = dim;
    out.dprime = dim;
    out.imbalance_delta = cfg.delta;
    Rng rng(cfg.seed);

    std::vector<CurveState> state(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        auto w = clip_to_box(curves[i], *out.window);
        if (w && w->first < w->second) state[i].window = *w;
        else state[i].active = false;
    }
    while (true) {
        std::vector<RatVec> samples(curves.size());
        std::map<Cell, std::vector<std::size_t>> cells;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const CurveState& st = state[i];
            if (!st.active) continue;
            std::vector<AlgebraicNumber> pts = st.cuts;
            pts.insert(pts.begin(), AlgebraicNumber(st.window.first));
            pts.push_back(AlgebraicNumber(st.window.second));
            std::size_t widest = 0;
            double width = -1;
            for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
                const double w = rough(pts[k + 1]) - rough(pts[k]);
                if (w > width) {
                    width = w;
                    widest = k;
                }
            }
            samples[i] = curves[i].point_at(inner_point(pts[widest], pts[widest + 1]));
            auto cell = sign_cell(out, samples[i]);
            if (cell) cells[*cell].push_back(i);
        }
        auto plan = plan_step(cells, dim, E - out.total_degree, cfg.schedule);
        if (!plan) break;
        const auto fits = fit_or_throw(samples, *plan, dim, dim, cfg, rng, candidate_count(cfg));

        // Keep the candidate whose exact traces load the fullest cell least.
        std::size_t chosen = 0, chosen_load = SIZE_MAX;
        std::vector<std::vector<UPoly>> composed(fits.size(), std::vector<UPoly>(curves.size()));
        std::vector<std::vector<std::vector<AlgebraicNumber>>> roots(
            fits.size(), std::vector<std::vector<AlgebraicNumber>>(curves.size()));
        for (std::size_t f = 0; f < fits.size(); ++f) {
            std::map<Cell, std::size_t> loads;
            for (std::size_t i = 0; i < curves.size(); ++i) {
                if (!state[i].active) continue;
                composed[f][i] = compose_with_curve(fits[f].factor, curves[i]);
                if (composed[f][i].is_zero()) continue;
                roots[f][i] = roots_inside(composed[f][i], state[i].window);
                if (fits.size() == 1) continue;
                for (const auto& c : trace_with(state[i], composed[f][i], roots[f][i])) ++loads[c];
            }
            std::size_t load = 0;
            for (const auto& [c, n] : loads) load = std::max(load, n);
            if (load < chosen_load) {
                chosen_load = load;
                chosen = f;
            }
        }
        accept(out, *plan, fits[chosen]);
        for (std::size_t i = 0; i < curves.size(); ++i) {
            CurveState& st = state[i];
            if (!st.active) continue;
            if (composed[chosen][i].is_zero()) {
                st.active = false;
                continue;
            }
            st.composed.push_back(composed[chosen][i]);
            st.cuts = merged_cuts(st.cuts, roots[chosen][i]);
        }
    }
    return out;
}

std::optional<Cell> sign_cell(const PartitionPoly& p, const RatVec& x)
{
    if (x.size() != p.dim && !p.factors.empty()) throw DimensionMismatch("sign_cell: point dimension");
    Cell c;
    c.reserve(p.factors.size());
    for (const auto& f : p.factors) {
        const int s = f.sign_at(x);
        if (s == 0) return std::nullopt;
        c.push_back(s);
    }
    return c;
}

bool CurveTrace::on_zero_set() const
{
    return std::any_of(contained_in_factor.begin(), contained_in_factor.end(), [](bool b) { return b; });
}

CurveTrace curve_cell_trace(const PartitionPoly& p, const ParamCurve& gamma, const std::pair<Rational, Rational>& t_range)
{
    if (!p.factors.empty() && gamma.dim() != p.dim) throw DimensionMismatch("curve_cell_trace: curve dimension");
    if (!(t_range.first < t_range.second)) throw Error("curve_cell_trace: empty parameter range");
    CurveTrace trace;
    std::vector<UPoly> composed;
    for (const auto& f : p.factors) {
        composed.push_back(compose_with_curve(f, gamma));
        trace.contained_in_factor.push_back(composed.back().is_zero());
    }
    if (trace.on_zero_set()) return trace;
    const auto pts = breakpoints(composed, t_range);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Rational t = inner_point(pts[k], pts[k + 1]);
        Cell c;
        for (const auto& h : composed) c.push_back(h.sign_at(t));
        trace.cells.insert(std::move(c));
    }
    return trace;
}

std::size_t bezout_trace_bound(const PartitionPoly& p, int curve_degree)
{
    std::size_t b = 1;
    for (const auto& f : p.factors) b += static_cast<std::size_t>(f.degree() * curve_degree);
    return b;
}

namespace {

void finish_audit(PartitionAudit& a, const PartitionPoly& p, double denominator)
{
    a.nonempty_cells = a.loads.size();
    for (const auto& [c, n] : a.loads) a.max_cell_load = std::max(a.max_cell_load, n);
    a.budget = static_cast<double>(a.objects) / denominator;
    a.measured_constant = a.budget > 0 ? static_cast<double>(a.max_cell_load) / a.budget : 0.0;
    a.sign_cell_limit = p.factors.size() >= 63 ? SIZE_MAX : (std::size_t{1} << p.factors.size());
    a.within_sign_cell_limit = a.nonempty_cells <= a.sign_cell_limit;
    a.degenerate = a.objects > 1 && !p.factors.empty() && a.nonempty_cells <= 1;
}

}  // namespace

PartitionAudit partition_audit(const PartitionPoly& p, const std::vector<RatVec>& points, int E)
{
    check_degree(E);
    PartitionAudit a;
    a.objects = points.size();
    for (const auto& x : points) {
        auto c = sign_cell(p, x);
        if (c) ++a.loads[*c];
        else ++a.objects_on_zero_set;
    }
    finish_audit(a, p, std::pow(static_cast<double>(E), static_cast<double>(std::max<std::size_t>(p.dprime, 1))));
    return a;
}

PartitionAudit partition_audit(const PartitionPoly& p, const std::vector<ParamCurve>& curves, int E,
                               std::optional<Box> box, unsigned threads)
{
    check_degree(E);
    const Box window = box ? *box : p.window ? *p.window : arrangement_box(curves);
    std::vector<std::optional<CurveTrace>> traces(curves.size());
    parallel_for(curves.size(), threads, [&](std::size_t i) {
        auto w = clip_to_box(curves[i], window);
        if (w && w->first < w->second) traces[i] = curve_cell_trace(p, curves[i], *w);
    });
    PartitionAudit a;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (!traces[i]) {
            ++a.objects_outside_window;
            continue;
        }
        ++a.objects;
        if (traces[i]->on_zero_set()) {
            ++a.objects_on_zero_set;
            continue;
        }
        if (traces[i]->cells.size() > bezout_trace_bound(p, curves[i].degree())) a.traces_within_bezout = false;
        for (const auto& c : traces[i]->cells) ++a.loads[c];
    }
    const double d = static_cast<double>(curves.empty() ? 1 : curves.front().dim());
    finish_audit(a, p, std::pow(static_cast<double>(E), d - 1));
    return a;
}

Json to_json(const PartitionPoly& p)
{
    Json j;
    j["dim"] = p.dim;
    j["dprime"] = p.dprime;
    j["total_degree"] = p.total_degree;
    j["imbalance_delta"] = to_json(p.imbalance_delta);
    Json factors = Json::array();
    for (const auto& f : p.factors) factors.push_back(to_json(f));
    j["factors"] = std::move(factors);
    Json log = Json::array();
    for (const auto& s : p.log) {
        Json step;
        step["degree"] = s.degree;
        step["classes"] = s.classes;
        step["bisected"] = s.bisected;
        step["worst_ratio"] = to_json(s.worst_ratio);
        log.push_back(std::move(step));
    }
    j["log"] = std::move(log);
    if (p.window) {
        Json w;
        w["lo"] = to_json(p.window->lo);
        w["hi"] = to_json(p.window->hi);
        j["window"] = std::move(w);
    }
    return j;
}

Json to_json(const PartitionAudit& a)
{
    Json j;
    j["objects"] = a.objects;
    j["objects_on_zero_set"] = a.objects_on_zero_set;
    j["max_cell_load"] = a.max_cell_load;
    j["nonempty_cells"] = a.nonempty_cells;
    j["budget"] = a.budget;
    j["measured_constant"] = a.measured_constant;
    j["sign_cell_limit"] = a.sign_cell_limit;
    j["within_sign_cell_limit"] = a.within_sign_cell_limit;
    j["degenerate"] = a.degenerate;
    j["traces_within_bezout"] = a.traces_within_bezout;
    j["objects_outside_window"] = a.objects_outside_window;
    Json loads = Json::object();
    for (const auto& [c, n] : a.loads) loads[cell_string(c)] = n;
    j["loads"] = std::move(loads);
    return j;
}

std::string audit_csv(const PartitionAudit& a)
{
    std::ostringstream os;
    os << "cell;load\n";
    for (const auto& [c, n] : a.loads) os << cell_string(c) << ';' << n << '\n';
    return os.str();
}

}  // namespace ilab
