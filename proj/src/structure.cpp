#include "ilab/structure.h"

#include "ilab/incidence.h"
#include "ilab/parallel.h"
#include "ilab/partition.h"
#include "ilab/reduction.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace ilab {

namespace {

Rational rpow(const Rational& x, unsigned long k)
{
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), k);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

int compare_power(const Rational& x, const Rational& coeff, std::size_t n, const Rational& e)
{
    if (x < 0 || coeff <= 0) throw Error("compare_power: needs x >= 0 and coeff > 0");
    if (n == 0) {
        if (e <= 0) throw Error("compare_power: 0 raised to a non-positive exponent");
        return x > 0 ? 1 : 0;
    }
    const unsigned long q = e.get_den().get_ui();
    const Integer p = e.get_num();
    const Rational lhs = rpow(x / coeff, q);
    const Rational nn(static_cast<unsigned long>(n));
    const Rational rhs = p >= 0 ? rpow(nn, p.get_ui()) : 1 / rpow(nn, Integer(-p).get_ui());
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::size_t ceil_power(const Rational& coeff, std::size_t n, const Rational& e)
{
    auto c = static_cast<std::size_t>(std::floor(power_value(coeff, n, e)));
    while (c > 0 && compare_power(Rational(static_cast<unsigned long>(c - 1)), coeff, n, e) >= 0) --c;
    while (compare_power(Rational(static_cast<unsigned long>(c)), coeff, n, e) < 0) ++c;
    return c;
}

double power_value(const Rational& coeff, std::size_t n, const Rational& e)
{
    return to_double(coeff) * std::pow(static_cast<double>(n), to_double(e));
}

void DecompConfig::validate() const
{
    if (epsilon <= 0 || epsilon >= Rational(1, 3)) throw Error("epsilon must lie in (0, 1/3)");
    if (E < 1) throw Error("partition degree E must be at least 1");
    if (M_prune_factor <= 0 || S_prune_C2 <= 0) throw Error("prune factors must be positive");
    if (A_exponent && *A_exponent <= 0) throw Error("A exponent must be positive");
    if (degcap_surface && *degcap_surface < 1) throw Error("degcap_surface must be at least 1");
    if (degcap_hyper < 1 || surface_search_degree < 1) throw Error("search degrees must be at least 1");
    if (partition_candidates < 1) throw Error("partition_candidates must be at least 1");
}

namespace {

using Ids = std::vector<std::size_t>;

std::string key_of(const MPoly& f) { return to_json(f).dump(); }

Variety canonical(Variety v)
{
    const bool linear = std::all_of(v.generators.begin(), v.generators.end(), [](const MPoly& g) { return g.degree() <= 1; });
    if (linear) {
        v.generators = canonical_linear_system(v.generators);
    } else {
        for (auto& g : v.generators) g = g.primitive();
        std::sort(v.generators.begin(), v.generators.end(), [](const MPoly& a, const MPoly& b) { return key_of(a) < key_of(b); });
        v.generators.erase(std::unique(v.generators.begin(), v.generators.end()), v.generators.end());
    }
    v.degree_bound = 1;
    for (const auto& g : v.generators) v.degree_bound *= std::max(1, g.degree());
    return v;
}

std::string key_of(const Variety& v)
{
    std::string k;
    for (const auto& g : v.generators) k += key_of(g) + ";";
    return k;
}

Variety hypersurface(const MPoly& g) { return canonical(Variety{{g}, static_cast<int>(g.nvars()) - 1, g.degree(), ""}); }

/// Insertion-ordered set of varieties keyed by their canonical form.
class VarietySet {
public:
    bool add(Variety v)
    {
        v = canonical(std::move(v));
        auto k = key_of(v);
        if (!keys_.insert(k).second) return false;
        items_.push_back(std::move(v));
        return true;
    }
    bool has(const Variety& v) const { return keys_.count(key_of(canonical(v))) > 0; }
    const std::vector<Variety>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

private:
    std::set<std::string> keys_;
    std::vector<Variety> items_;
};

std::size_t count_in(const Ids& sorted_a, const Ids& sorted_b)
{
    std::size_t c = 0;
    auto i = sorted_a.begin();
    auto j = sorted_b.begin();
    while (i != sorted_a.end() && j != sorted_b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else ++c, ++i, ++j;
    }
    return c;
}

Ids set_minus(const Ids& a, const std::set<std::size_t>& b)
{
    Ids out;
    for (auto i : a)
        if (!b.count(i)) out.push_back(i);
    return out;
}

std::uint64_t level_seed(std::uint64_t seed, int depth, const Ids& ids)
{
    std::uint64_t h = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(depth) + 1;
    for (auto i : ids) h = (h ^ (i + 0x632BE59BD9B4E019ull)) * 0x100000001B3ull;
    return h;
}

struct Stats {
    std::vector<std::pair<std::string, std::size_t>> log;
    void put(const std::string& k, std::size_t v) { log.emplace_back(k, v); }
};

/// State shared by every recursion level.
struct Context {
    const std::vector<ParamCurve>* curves = nullptr;
    DecompConfig cfg;
    /// Per two-rich point: sorted indices of its curves, and a coordinate enclosure.
    std::vector<Ids> incid;
    std::vector<RatVec> lo, hi;
    int D = 1;
    bool incomplete = false;
    std::mutex mu;
    std::map<std::string, Factorization> factor_cache;

    Factorization factors(const MPoly& f)
    {
        const auto k = key_of(f);
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = factor_cache.find(k);
            if (it != factor_cache.end()) return it->second;
        }
        auto fac = irreducible_components(f);
        std::lock_guard<std::mutex> lock(mu);
        factor_cache.emplace(k, fac);
        return fac;
    }
    void flag_incomplete()
    {
        std::lock_guard<std::mutex> lock(mu);
        incomplete = true;
    }
};

/// Curves of one level seen in a 3-dimensional coordinate space.
struct View {
    std::vector<ParamCurve> curves;  // by top index; unused entries default
    std::vector<std::size_t> coords;
};

Ids members_of(const Variety& v, const Ids& ids, const std::vector<ParamCurve>& curves)
{
    Ids out;
    for (auto i : ids)
        if (v.contains(curves[i])) out.push_back(i);
    return out;
}

Ids members_of(const MPoly& f, const Ids& ids, const std::vector<ParamCurve>& curves)
{
    Ids out;
    for (auto i : ids)
        if (curve_contained_in(curves[i], f)) out.push_back(i);
    return out;
}

/// Points of the level: two-rich points with at least two curves among ids.
std::vector<std::size_t> level_points(const Context& ctx, const Ids& ids)
{
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < ctx.incid.size(); ++p)
        if (count_in(ctx.incid[p], ids) >= 2) out.push_back(p);
    return out;
}

/// Arrangement box of the level's curves, enlarged to hold every level point.
Box level_box(const Context& ctx, const Ids& ids, const View& view)
{
    std::vector<ParamCurve> cs;
    for (auto i : ids) cs.push_back(view.curves[i]);
    Box b = arrangement_box(cs);
    for (auto p : level_points(ctx, ids))
        for (std::size_t k = 0; k < view.coords.size(); ++k) {
            const auto c = view.coords[k];
            if (ctx.lo[p][c] - 1 < b.lo[k]) b.lo[k] = ctx.lo[p][c] - 1;
            if (ctx.hi[p][c] + 1 > b.hi[k]) b.hi[k] = ctx.hi[p][c] + 1;
        }
    return b;
}

struct LevelSplit {
    std::vector<MPoly> factors;        // partition factors followed by cluster polynomials
    std::vector<Ids> cells;            // curves per sign cell, cells in order
    std::size_t on_zero_set = 0;
};

/// Partition the level, add clusters of at least A curves (degree 1, then up
/// to cluster_degree), and route every curve off Z(P) to the cells it meets.
LevelSplit split_level(Context& ctx, const Ids& ids, const View& view, std::size_t A, int cluster_degree, int depth)
{
    std::vector<ParamCurve> cs;
    for (auto i : ids) cs.push_back(view.curves[i]);
    const Box box = level_box(ctx, ids, view);
    LevelSplit out;
    PartitionPoly p;
    PartitionConfig pc;
    pc.seed = level_seed(ctx.cfg.seed, depth, ids);
    pc.candidates = ctx.cfg.partition_candidates;
    try {
        p = partition_curves(cs, ctx.cfg.E, pc, box);
    } catch (const Error&) {
        p = PartitionPoly{};
        p.dim = view.coords.size();
    }
    out.factors = p.factors;

    std::vector<ParamCurve> rest = cs;
    for (int k = 1; k <= cluster_degree && !rest.empty(); ++k) {
        auto r = cluster_hypersurfaces(rest, std::max<std::size_t>(A, 1), k);
        for (const auto& c : r.hypersurfaces) out.factors.push_back(c.poly);
        std::set<std::string> left(r.residual.begin(), r.residual.end());
        std::erase_if(rest, [&](const ParamCurve& c) { return !left.count(c.label()); });
    }
    p.factors = out.factors;

    std::map<Cell, Ids> cells;
    for (auto i : ids) {
        const auto& c = view.curves[i];
        bool on_zero = false;
        for (const auto& f : out.factors) on_zero = on_zero || curve_contained_in(c, f);
        if (on_zero) {
            ++out.on_zero_set;
            continue;
        }
        auto window = clip_to_box(c, box);
        if (!window) continue;
        for (const auto& cell : curve_cell_trace(p, c, *window).cells) cells[cell].push_back(i);
    }
    for (auto& [cell, m] : cells) out.cells.push_back(std::move(m));
    return out;
}

/// Surfaces (polynomials in the view's 3 coordinates) holding at least
/// 2 n^(1/2 + eps) of the level's curves each.
std::vector<MPoly> r3_level(Context& ctx, const View& view, const Ids& ids, const Rational& eps, int depth, Stats* stats)
{
    const std::size_t n = ids.size();
    if (n <= ctx.cfg.base_case_n) {
        if (stats) stats->put("base_case", 1);
        return {};
    }
    const Rational keep = Rational(1, 2) + eps;
    auto split = split_level(ctx, ids, view, ceil_power(2, n, keep), ctx.cfg.surface_search_degree, depth);

    std::vector<std::vector<MPoly>> sub(split.cells.size());
    std::size_t stalled = 0;
    for (const auto& cell : split.cells) stalled += cell.size() >= n;
    parallel_for(split.cells.size(), depth == 0 ? ctx.cfg.threads : 1, [&](std::size_t c) {
        const auto& cell = split.cells[c];
        if (cell.size() < 2 || cell.size() >= n) return;
        assert(cell.size() < n);
        sub[c] = r3_level(ctx, view, cell, eps, depth + 1, nullptr);
    });

    std::map<std::string, MPoly> seen;
    std::vector<MPoly> s1, s2;
    auto add = [&](std::vector<MPoly>& to, const MPoly& f) {
        auto g = f.primitive();
        if (seen.emplace(key_of(g), g).second) to.push_back(g);
    };
    for (const auto& v : sub)
        for (const auto& f : v) add(s1, f);
    s2 = s1;
    std::size_t s0 = 0;
    for (const auto& f : split.factors) {
        auto fac = ctx.factors(f);
        if (!fac.complete) ctx.flag_incomplete();
        for (const auto& [h, mult] : fac.factors) {
            ++s0;
            add(s2, h);
        }
    }
    std::vector<MPoly> kept;
    for (const auto& f : s2)
        if (compare_power(Rational(static_cast<unsigned long>(members_of(f, ids, view.curves).size())), 2, n, keep) >= 0)
            kept.push_back(f);
    if (stats) {
        stats->put("cells", split.cells.size());
        stats->put("stalled_cells", stalled);
        stats->put("zero_set_curves", split.on_zero_set);
        stats->put("S0", s0);
        stats->put("S1", s1.size());
        stats->put("S2", s2.size());
        stats->put("S", kept.size());
    }
    return kept;
}

View identity_view(const std::vector<ParamCurve>& curves)
{
    View v{curves, {}};
    for (std::size_t k = 0; k < (curves.empty() ? 0 : curves.front().dim()); ++k) v.coords.push_back(k);
    return v;
}

/// Drop one coordinate g depends on, choosing the one that collapses the
/// fewest curves to points (ties: the highest index).
View project_into(const MPoly& g, const Ids& ids, const std::vector<ParamCurve>& curves, Ids& usable)
{
    const std::size_t d = g.nvars();
    std::size_t best = d, best_bad = 0;
    for (std::size_t j = d; j-- > 0;) {
        if (!g.depends_on(j)) continue;
        std::size_t bad = 0;
        for (auto i : ids) {
            bool moving = false;
            for (std::size_t c = 0; c < d; ++c)
                if (c != j && curves[i].components()[c].degree() > 0) moving = true;
            bad += !moving;
        }
        if (best == d || bad < best_bad) best = j, best_bad = bad;
    }
    View v;
    v.curves.resize(curves.size());
    for (std::size_t c = 0; c < d; ++c)
        if (c != best) v.coords.push_back(c);
    usable.clear();
    for (auto i : ids) {
        std::vector<UPoly> comps;
        bool moving = false;
        for (auto c : v.coords) {
            comps.push_back(curves[i].components()[c]);
            moving = moving || comps.back().degree() > 0;
        }
        if (!moving) continue;
        v.curves[i] = ParamCurve(curves[i].label(), std::move(comps));
        usable.push_back(i);
    }
    return v;
}

MPoly lift(const MPoly& h, const std::vector<std::size_t>& coords, std::size_t d)
{
    std::vector<MPoly> images;
    for (auto c : coords) images.push_back(MPoly::variable(d, c));
    return h.compose(images);
}

struct R4Out {
    std::vector<MPoly> M;
    std::vector<Variety> S;
};

/// Hybrid points of a level: on two curves of some L_M but not on two curves
/// of its L*_M nor of any L_S.
std::size_t count_hybrid(const std::vector<Ids>& incid, const std::vector<Ids>& LM, const std::vector<Ids>& Lstar,
                         const std::vector<Ids>& LS)
{
    std::size_t h = 0;
    for (const auto& I : incid) {
        if (std::any_of(LS.begin(), LS.end(), [&](const Ids& s) { return count_in(I, s) >= 2; })) continue;
        for (std::size_t m = 0; m < LM.size(); ++m)
            if (count_in(I, LM[m]) >= 2 && count_in(I, Lstar[m]) < 2) {
                ++h;
                break;
            }
    }
    return h;
}

std::vector<Variety> split_components(Context& ctx, const Variety& v)
{
    std::vector<std::vector<MPoly>> choices;
    for (const auto& g : v.generators) {
        if (g.degree() <= 1) {
            choices.push_back({g});
            continue;
        }
        auto fac = ctx.factors(g);
        if (!fac.complete) ctx.flag_incomplete();
        std::vector<MPoly> fs;
        for (const auto& [f, mult] : fac.factors) fs.push_back(f);
        choices.push_back(std::move(fs));
    }
    std::vector<Variety> out{Variety{{}, v.claimed_dim, 1, ""}};
    for (const auto& opts : choices) {
        std::vector<Variety> next;
        for (const auto& partial : out)
            for (const auto& f : opts) {
                auto w = partial;
                w.generators.push_back(f);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    for (auto& w : out) w = canonical(std::move(w));
    return out;
}

R4Out r4_level(Context& ctx, const Ids& ids, const Rational& eps, int depth, Stats* stats)
{
    const std::size_t n = ids.size();
    if (n <= ctx.cfg.base_case_n) {
        if (stats) stats->put("base_case", 1);
        return {};
    }
    const auto& curves = *ctx.curves;
    const std::size_t d = curves.front().dim();
    const View view = identity_view(curves);
    const Rational m_exp = Rational(2, 3) + eps;
    auto split = split_level(ctx, ids, view, ceil_power(1, n, m_exp), ctx.cfg.degcap_hyper, depth);

    std::vector<R4Out> sub(split.cells.size());
    std::size_t stalled = 0;
    for (const auto& cell : split.cells) stalled += cell.size() >= n;
    parallel_for(split.cells.size(), depth == 0 ? ctx.cfg.threads : 1, [&](std::size_t c) {
        const auto& cell = split.cells[c];
        if (cell.size() < 2 || cell.size() >= n) return;
        assert(cell.size() < n);
        sub[c] = r4_level(ctx, cell, eps, depth + 1, nullptr);
    });

    // M1: irreducible components of Z(P), then the cells' hypersurfaces.
    VarietySet m1;
    for (const auto& f : split.factors) {
        auto fac = ctx.factors(f);
        if (!fac.complete) ctx.flag_incomplete();
        for (const auto& [h, mult] : fac.factors) m1.add(hypersurface(h));
    }
    for (const auto& s : sub)
        for (const auto& g : s.M) m1.add(hypersurface(g));
    VarietySet s1;
    for (const auto& s : sub)
        for (const auto& v : s.S) s1.add(v);

    const auto& Ms = m1.items();
    std::vector<Ids> LM(Ms.size());
    parallel_for(Ms.size(), depth == 0 ? ctx.cfg.threads : 1, [&](std::size_t m) { LM[m] = members_of(Ms[m], ids, curves); });

    VarietySet s2 = s1;
    for (std::size_t a = 0; a < Ms.size(); ++a)
        for (std::size_t b = a + 1; b < Ms.size(); ++b)
            if (count_in(LM[a], LM[b]) > 0) {
                Variety v{{Ms[a].generators.front(), Ms[b].generators.front()}, static_cast<int>(d) - 2, 1, ""};
                s2.add(std::move(v));
            }
    const auto& S2 = s2.items();
    std::vector<Ids> LS2(S2.size());
    parallel_for(S2.size(), depth == 0 ? ctx.cfg.threads : 1, [&](std::size_t s) { LS2[s] = members_of(S2[s], ids, curves); });
    std::set<std::size_t> covered;
    for (const auto& l : LS2) covered.insert(l.begin(), l.end());
    std::vector<Ids> Lstar(Ms.size());
    for (std::size_t m = 0; m < Ms.size(); ++m) Lstar[m] = set_minus(LM[m], covered);

    std::size_t hybrid = 0;
    if (stats) {
        std::vector<Ids> incid;
        for (auto p : level_points(ctx, ids)) incid.push_back(ctx.incid[p]);
        hybrid = count_hybrid(incid, LM, Lstar, LS2);
    }

    std::vector<std::size_t> m2;
    for (std::size_t m = 0; m < Ms.size(); ++m)
        if (compare_power(Rational(static_cast<unsigned long>(Lstar[m].size())), ctx.cfg.M_prune_factor, n, m_exp) > 0)
            m2.push_back(m);

    // S3: S2 plus the surfaces found inside each pruned hypersurface.
    VarietySet s3 = s2;
    std::size_t inner_calls = 0;
    for (std::size_t m = 0; m < Ms.size(); ++m) {
        if (std::find(m2.begin(), m2.end(), m) != m2.end() || Lstar[m].size() < 2) continue;
        const MPoly& g = Ms[m].generators.front();
        Ids usable;
        const View inner = project_into(g, Lstar[m], curves, usable);
        if (usable.size() < 2) continue;
        ++inner_calls;
        for (const auto& h : r3_level(ctx, inner, usable, eps / 2, depth + 1, nullptr))
            s3.add(Variety{{g, lift(h, inner.coords, d)}, static_cast<int>(d) - 2, 1, ""});
    }

    VarietySet s4;
    for (const auto& v : s3.items())
        for (auto& c : split_components(ctx, v)) s4.add(std::move(c));
    const int degcap = ctx.cfg.degcap_surface.value_or(clustering_degcap(ctx.D));
    std::vector<Variety> s4low;
    for (const auto& v : s4.items())
        if (v.degree_bound <= degcap) s4low.push_back(v);
    std::vector<Variety> s5;
    std::vector<Ids> LS5;
    const Rational s_exp = Rational(1, 3) + 2 * eps;
    for (const auto& v : s4low) {
        auto mem = members_of(v, ids, curves);
        if (compare_power(Rational(static_cast<unsigned long>(mem.size())), ctx.cfg.S_prune_C2, n, s_exp) > 0) {
            s5.push_back(v);
            LS5.push_back(std::move(mem));
        }
    }

    // M3: hypersurfaces through at least A surfaces of S5. A surface is seen
    // through its curves; vanishing on them forces containment once their
    // total degree exceeds degcap_hyper * deg(S).
    const Rational a_exp = (Rational(2, 3) - 2 * eps) * ctx.cfg.A_exponent.value_or(Rational(1, 2) + eps / 2);
    const std::size_t A = ceil_power(1, n, a_exp);
    std::vector<SampledObject> objs;
    std::vector<std::size_t> obj_of;
    for (std::size_t s = 0; s < s5.size(); ++s) {
        long total = 0;
        for (auto i : LS5[s]) total += curves[i].degree();
        if (total <= static_cast<long>(ctx.cfg.degcap_hyper) * s5[s].degree_bound) continue;
        std::ostringstream label;
        label << std::setw(6) << std::setfill('0') << s;
        Ids mem = LS5[s];
        objs.push_back(SampledObject{label.str(), d, [mem, &curves](int k) {
                                         std::vector<RatVec> pts;
                                         for (auto i : mem)
                                             for (int t = 0; t <= k * curves[i].degree(); ++t) pts.push_back(curves[i].point_at(Rational(t)));
                                         return pts;
                                     }});
        obj_of.push_back(s);
    }
    VarietySet m3;
    std::set<std::size_t> clustered;
    for (int k = 1; k <= ctx.cfg.degcap_hyper && objs.size() >= A; ++k) {
        auto r = cluster_hypersurfaces(objs, std::max<std::size_t>(A, 1), k);
        std::set<std::string> taken;
        for (const auto& c : r.hypersurfaces) {
            auto fac = ctx.factors(c.poly);
            if (!fac.complete) ctx.flag_incomplete();
            for (const auto& label : c.members) {
                const std::size_t s = obj_of[std::stoul(label)];
                for (const auto& [f, mult] : fac.factors) {
                    bool all = true;
                    for (auto i : LS5[s]) all = all && curve_contained_in(curves[i], f);
                    if (!all) continue;
                    m3.add(hypersurface(f));
                    clustered.insert(s);
                    break;
                }
                taken.insert(label);
            }
        }
        std::erase_if(objs, [&](const SampledObject& o) { return taken.count(o.label) > 0; });
    }

    R4Out out;
    VarietySet mfinal;
    for (auto m : m2) mfinal.add(Ms[m]);
    for (const auto& v : m3.items()) mfinal.add(v);
    for (const auto& v : mfinal.items()) out.M.push_back(v.generators.front());
    for (std::size_t s = 0; s < s5.size(); ++s)
        if (!clustered.count(s)) out.S.push_back(s5[s]);

    if (stats) {
        std::size_t star = 0;
        for (const auto& l : Lstar) star += l.size();
        stats->put("cells", split.cells.size());
        stats->put("stalled_cells", stalled);
        stats->put("zero_set_curves", split.on_zero_set);
        stats->put("M1", Ms.size());
        stats->put("S1", s1.size());
        stats->put("S2", s2.size());
        stats->put("L*_M", star);
        stats->put("hybrid", hybrid);
        stats->put("M2", m2.size());
        stats->put("inner_calls", inner_calls);
        stats->put("S3", s3.size());
        stats->put("S4", s4.size());
        stats->put("S4_low", s4low.size());
        stats->put("S5", s5.size());
        stats->put("A", A);
        stats->put("M3", m3.size());
        stats->put("M", out.M.size());
        stats->put("S", out.S.size());
    }
    return out;
}

void check_input(const std::vector<ParamCurve>& curves, std::size_t dim, const char* what)
{
    std::set<std::string> labels;
    for (const auto& c : curves) {
        if (c.dim() != dim) throw DimensionMismatch(std::string(what) + ": curve '" + c.label() + "' has the wrong dimension");
        if (!labels.insert(c.label()).second) throw Error(std::string(what) + ": duplicate label '" + c.label() + "'");
    }
}

void fill_incidence(Context& ctx, const IncidenceReport& inc)
{
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ctx.curves->size(); ++i) index[(*ctx.curves)[i].label()] = i;
    for (const auto& p : inc.rich_points) {
        Ids ids;
        for (const auto& l : p.labels) ids.push_back(index.at(l));
        std::sort(ids.begin(), ids.end());
        ctx.incid.push_back(std::move(ids));
        RatVec lo, hi;
        for (const auto& a : p.coords) {
            lo.push_back(a.lo());
            hi.push_back(a.hi());
        }
        ctx.lo.push_back(std::move(lo));
        ctx.hi.push_back(std::move(hi));
    }
    for (const auto& c : *ctx.curves) ctx.D = std::max(ctx.D, c.degree());
}

Ids all_ids(std::size_t n)
{
    Ids ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

std::vector<std::string> labels_of(const Ids& ids, const std::vector<ParamCurve>& curves)
{
    std::vector<std::string> out;
    for (auto i : ids) out.push_back(curves[i].label());
    std::sort(out.begin(), out.end());
    return out;
}

/// Points of P2 not on two curves of any member set.
std::vector<RichPoint> residual_of(const IncidenceReport& inc, const std::vector<Member>& M, const std::vector<Member>& S)
{
    std::vector<RichPoint> out;
    for (const auto& p : inc.rich_points) {
        bool covered = false;
        for (const auto* list : {&M, &S})
            for (const auto& m : *list) {
                std::size_t c = 0;
                for (const auto& l : p.labels) c += std::binary_search(m.curves.begin(), m.curves.end(), l);
                covered = covered || c >= 2;
            }
        if (!covered) out.push_back(p);
    }
    return out;
}

Decomposition finish(const std::vector<ParamCurve>& curves, const Context& ctx, const IncidenceReport& inc,
                     const std::vector<Variety>& M, const std::vector<Variety>& S, Stats stats)
{
    Decomposition dec;
    dec.dim = curves.empty() ? 0 : curves.front().dim();
    dec.n = curves.size();
    dec.epsilon = ctx.cfg.epsilon;
    const Ids ids = all_ids(curves.size());
    for (std::size_t m = 0; m < M.size(); ++m) {
        Variety v = M[m];
        v.label = "M" + std::to_string(m + 1);
        dec.M.push_back(Member{v, labels_of(members_of(v, ids, curves), curves)});
    }
    for (std::size_t s = 0; s < S.size(); ++s) {
        Variety v = S[s];
        v.label = "S" + std::to_string(s + 1);
        dec.S.push_back(Member{v, labels_of(members_of(v, ids, curves), curves)});
    }
    dec.residual_rich_points = residual_of(inc, dec.M, dec.S);
    stats.put("P2", inc.p2());
    stats.put("residual", dec.residual_rich_points.size());
    dec.stage_log = std::move(stats.log);
    dec.incomplete_components = ctx.incomplete;
    return dec;
}

}  // namespace

Decomposition decompose_r3(const std::vector<ParamCurve>& curves, const DecompConfig& cfg)
{
    cfg.validate();
    check_input(curves, 3, "decompose_r3");
    Context ctx;
    ctx.curves = &curves;
    ctx.cfg = cfg;
    const auto inc = two_rich_points(curves, cfg.threads);
    fill_incidence(ctx, inc);
    Stats stats;
    stats.put("n", curves.size());
    std::vector<Variety> S;
    if (!curves.empty()) {
        const View view = identity_view(curves);
        for (const auto& h : r3_level(ctx, view, all_ids(curves.size()), cfg.epsilon, 0, &stats))
            S.push_back(Variety{{h}, 2, h.degree(), ""});
    }
    return finish(curves, ctx, inc, {}, S, std::move(stats));
}

Decomposition decompose_r4(const std::vector<ParamCurve>& curves, const DecompConfig& cfg)
{
    cfg.validate();
    check_input(curves, 4, "decompose_r4");
    Context ctx;
    ctx.curves = &curves;
    ctx.cfg = cfg;
    const auto inc = two_rich_points(curves, cfg.threads);
    fill_incidence(ctx, inc);
    Stats stats;
    stats.put("n", curves.size());
    std::vector<Variety> M, S;
    if (!curves.empty()) {
        auto out = r4_level(ctx, all_ids(curves.size()), cfg.epsilon, 0, &stats);
        for (const auto& g : out.M) M.push_back(hypersurface(g));
        S = std::move(out.S);
    }
    return finish(curves, ctx, inc, M, S, std::move(stats));
}

std::size_t hybrid_points(const std::vector<ParamCurve>& curves, const std::vector<Variety>& M, const std::vector<Variety>& S,
                          unsigned threads)
{
    if (M.empty() || curves.empty()) return 0;
    const auto inc = two_rich_points(curves, threads);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < curves.size(); ++i) index[curves[i].label()] = i;
    std::vector<Ids> incid;
    for (const auto& p : inc.rich_points) {
        Ids ids;
        for (const auto& l : p.labels) ids.push_back(index.at(l));
        std::sort(ids.begin(), ids.end());
        incid.push_back(std::move(ids));
    }
    const Ids ids = all_ids(curves.size());
    std::vector<Ids> LM(M.size()), LS(S.size());
    parallel_for(M.size(), threads, [&](std::size_t m) { LM[m] = members_of(M[m], ids, curves); });
    parallel_for(S.size(), threads, [&](std::size_t s) { LS[s] = members_of(S[s], ids, curves); });
    std::set<std::size_t> covered;
    for (const auto& l : LS) covered.insert(l.begin(), l.end());
    std::vector<Ids> Lstar;
    for (const auto& l : LM) Lstar.push_back(set_minus(l, covered));
    return count_hybrid(incid, LM, Lstar, LS);
}

namespace {

bool same_point(const RichPoint& a, const RichPoint& b) { return a.labels == b.labels && compare(a.coords, b.coords) == 0; }

ContractCheck at_most(std::string name, std::size_t count, std::size_t n, const Rational& e)
{
    ContractCheck c{std::move(name), true, static_cast<double>(count), power_value(1, n, e)};
    c.holds = n == 0 ? count == 0 : compare_power(Rational(static_cast<unsigned long>(count)), 1, n, e) <= 0;
    return c;
}

ContractCheck each_at_least(std::string name, const std::vector<Member>& list, std::size_t n, const Rational& e)
{
    ContractCheck c{std::move(name), true, 0, power_value(1, n, e)};
    bool first = true;
    for (const auto& m : list) {
        const double v = static_cast<double>(m.curves.size());
        c.measured = first ? v : std::min(c.measured, v);
        first = false;
        if (compare_power(Rational(static_cast<unsigned long>(m.curves.size())), 1, n, e) < 0) c.holds = false;
    }
    return c;
}

}  // namespace

AuditReport audit_decomposition(const std::vector<ParamCurve>& curves, const Decomposition& dec, const Rational& epsilon,
                                unsigned threads)
{
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < curves.size(); ++i) index[curves[i].label()] = i;
    std::vector<const Member*> all;
    for (const auto& m : dec.M) all.push_back(&m);
    for (const auto& s : dec.S) all.push_back(&s);
    for (const auto* m : all)
        for (const auto& l : m->curves)
            if (!index.count(l)) throw Error("audit_decomposition: unknown curve '" + l + "' in " + m->variety.label);
    for (const auto& p : dec.residual_rich_points)
        for (const auto& l : p.labels)
            if (!index.count(l)) throw Error("audit_decomposition: unknown curve '" + l + "' in the residual");

    AuditReport a;
    a.n = curves.size();
    a.dim = dec.dim;
    a.epsilon = epsilon;
    const Ids ids = all_ids(curves.size());
    std::vector<char> contained(all.size()), complete(all.size());
    parallel_for(all.size(), threads, [&](std::size_t k) {
        const auto& m = *all[k];
        bool ok = true;
        for (const auto& l : m.curves) ok = ok && m.variety.contains(curves[index.at(l)]);
        contained[k] = ok;
        auto sorted = m.curves;
        std::sort(sorted.begin(), sorted.end());
        complete[k] = labels_of(members_of(m.variety, ids, curves), curves) == sorted;
    });
    a.containment = std::all_of(contained.begin(), contained.end(), [](char c) { return c != 0; });
    a.membership_complete = std::all_of(complete.begin(), complete.end(), [](char c) { return c != 0; });

    const auto inc = two_rich_points(curves, threads);
    std::vector<Member> M = dec.M, S = dec.S;
    for (auto* list : {&M, &S})
        for (auto& m : *list) std::sort(m.curves.begin(), m.curves.end());
    const auto recount = residual_of(inc, M, S);
    a.residual = dec.residual_rich_points.size();
    a.residual_exact = recount.size() == dec.residual_rich_points.size() &&
                       std::equal(recount.begin(), recount.end(), dec.residual_rich_points.begin(), same_point);
    // Every stored residual point is two-rich, and every uncovered point is stored.
    bool sound = true;
    for (const auto& p : dec.residual_rich_points)
        sound = sound && std::any_of(inc.rich_points.begin(), inc.rich_points.end(), [&](const RichPoint& q) { return same_point(p, q); });
    for (const auto& p : recount)
        sound = sound && std::any_of(dec.residual_rich_points.begin(), dec.residual_rich_points.end(),
                                     [&](const RichPoint& q) { return same_point(p, q); });
    a.soundness = sound;

    const std::size_t n = curves.size();
    Rational res_exp;
    if (dec.dim == 3) {
        a.contracts.push_back(at_most("|S| <= n^(1/2-eps)", dec.S.size(), n, Rational(1, 2) - epsilon));
        a.contracts.push_back(each_at_least("|L_S| >= n^(1/2+eps)", dec.S, n, Rational(1, 2) + epsilon));
        res_exp = Rational(3, 2) + epsilon;
    } else {
        int D = 1;
        for (const auto& c : curves) D = std::max(D, c.degree());
        a.contracts.push_back(at_most("|M| <= n^(1/3-eps)", dec.M.size(), n, Rational(1, 3) - epsilon));
        a.contracts.push_back(each_at_least("|L_M| >= n^(2/3+eps)", dec.M, n, Rational(2, 3) + epsilon));
        a.contracts.push_back(at_most("|S| <= n^(2/3-2eps)", dec.S.size(), n, Rational(2, 3) - 2 * epsilon));
        a.contracts.push_back(each_at_least("|L_S| >= n^(1/3+2eps)", dec.S, n, Rational(1, 3) + 2 * epsilon));
        ContractCheck deg{"deg S <= 100 D^2", true, 0, static_cast<double>(clustering_degcap(D))};
        for (const auto& s : dec.S) {
            deg.measured = std::max(deg.measured, static_cast<double>(s.variety.degree_bound));
            deg.holds = deg.holds && s.variety.degree_bound <= clustering_degcap(D);
        }
        a.contracts.push_back(deg);
        res_exp = Rational(4, 3) + 3 * epsilon;
    }
    a.C_meas = n == 0 ? 0 : static_cast<double>(a.residual) / power_value(1, n, res_exp);
    return a;
}

namespace {

Json member_json(const Member& m)
{
    Json j = to_json(m.variety);
    j["curves"] = m.curves;
    return j;
}

Member member_from_json(const Json& j)
{
    Member m{variety_from_json(j), {}};
    if (!j.contains("curves") || !j["curves"].is_array()) throw ParseError("member needs a curves array");
    for (const auto& l : j["curves"]) {
        if (!l.is_string()) throw ParseError("member curve labels must be strings");
        m.curves.push_back(l.get<std::string>());
    }
    return m;
}

}  // namespace

Json to_json(const Decomposition& d)
{
    Json j;
    j["dim"] = d.dim;
    j["n"] = d.n;
    j["epsilon"] = to_json(d.epsilon);
    Json M = Json::array(), S = Json::array(), R = Json::array(), log = Json::array();
    for (const auto& m : d.M) M.push_back(member_json(m));
    for (const auto& s : d.S) S.push_back(member_json(s));
    for (const auto& p : d.residual_rich_points) R.push_back(to_json(p));
    for (const auto& [k, v] : d.stage_log) log.push_back(Json::array({k, v}));
    j["M"] = std::move(M);
    j["S"] = std::move(S);
    j["residual_rich_points"] = std::move(R);
    j["stage_log"] = std::move(log);
    j["incomplete_components"] = d.incomplete_components;
    return j;
}

Decomposition decomposition_from_json(const Json& j)
{
    if (!j.is_object()) throw ParseError("decomposition must be an object");
    for (const char* k : {"dim", "n", "epsilon", "M", "S", "residual_rich_points"})
        if (!j.contains(k)) throw ParseError(std::string("decomposition is missing '") + k + "'");
    Decomposition d;
    d.dim = j["dim"].get<std::size_t>();
    d.n = j["n"].get<std::size_t>();
    d.epsilon = rational_from_json(j["epsilon"]);
    for (const auto& m : j["M"]) d.M.push_back(member_from_json(m));
    for (const auto& s : j["S"]) d.S.push_back(member_from_json(s));
    for (const auto& p : j["residual_rich_points"]) d.residual_rich_points.push_back(rich_point_from_json(p));
    if (j.contains("stage_log"))
        for (const auto& e : j["stage_log"]) d.stage_log.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::size_t>());
    d.incomplete_components = j.value("incomplete_components", false);
    return d;
}

Json to_json(const AuditReport& a)
{
    Json j;
    j["n"] = a.n;
    j["dim"] = a.dim;
    j["epsilon"] = to_json(a.epsilon);
    j["containment"] = a.containment;
    j["membership_complete"] = a.membership_complete;
    j["residual_exact"] = a.residual_exact;
    j["soundness"] = a.soundness;
    Json cs = Json::array();
    for (const auto& c : a.contracts) {
        Json x;
        x["name"] = c.name;
        x["holds"] = c.holds;
        x["measured"] = c.measured;
        x["bound"] = c.bound;
        cs.push_back(std::move(x));
    }
    j["contracts"] = std::move(cs);
    j["residual"] = a.residual;
    j["C_meas"] = a.C_meas;
    j["sound"] = a.sound();
    return j;
}

std::string stage_table(const Decomposition& d)
{
    std::size_t width = 5;
    for (const auto& [k, v] : d.stage_log) width = std::max(width, k.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width)) << "stage" << "  count\n";
    for (const auto& [k, v] : d.stage_log) os << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << "\n";
    return os.str();
}

}  // namespace ilab
