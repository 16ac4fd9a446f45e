#include "ilab/incidence.h"

#include "ilab/parallel.h"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

namespace ilab {

IncidenceReport two_rich_points(const std::vector<ParamCurve>& curves, unsigned threads)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = curves.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return curves[a].label() < curves[b].label(); });

    std::vector<std::vector<std::pair<AlgebraicPoint, std::size_t>>> found(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const ParamCurve& a = curves[order[i]];
        for (std::size_t j = i + 1; j < n; ++j) {
            const ParamCurve& b = curves[order[j]];
            auto meet = intersect_curves(a, b);
            if (meet.identical) throw Error("identical curves '" + a.label() + "' and '" + b.label() + "'");
            for (auto& p : meet.points) found[i].emplace_back(std::move(p), j);
        }
    });

    std::map<AlgebraicPoint, std::set<std::string>, AlgebraicPointLess> merged;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& [p, j] : found[i]) {
            auto& labels = merged[p];
            labels.insert(curves[order[i]].label());
            labels.insert(curves[order[j]].label());
        }
    }
    IncidenceReport r;
    r.n_objects = n;
    r.pair_tests = n * (n > 0 ? n - 1 : 0) / 2;
    std::size_t max_mult = 0;
    for (auto& [p, labels] : merged) {
        r.rich_points.push_back({p, std::vector<std::string>(labels.begin(), labels.end())});
        max_mult = std::max(max_mult, labels.size());
    }
    for (std::size_t k = 2; k <= max_mult; ++k) {
        std::size_t c = 0;
        for (const auto& p : r.rich_points) c += p.multiplicity() >= k;
        r.counts_by_multiplicity[k] = c;
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

IncidenceReport two_rich_points_brute_force(const std::vector<ParamCurve>& curves)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::pair<AlgebraicPoint, std::set<std::string>>> seen;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            auto meet = intersect_curves(curves[i], curves[j]);
            if (meet.identical) throw Error("identical curves '" + curves[i].label() + "' and '" + curves[j].label() + "'");
            for (const auto& p : meet.points) {
                auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& q) { return compare(q.first, p) == 0; });
                if (it == seen.end()) it = seen.insert(seen.end(), {p, {}});
                it->second.insert(curves[i].label());
                it->second.insert(curves[j].label());
            }
        }
    std::sort(seen.begin(), seen.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    IncidenceReport r;
    r.n_objects = curves.size();
    r.pair_tests = curves.size() * (curves.empty() ? 0 : curves.size() - 1) / 2;
    for (auto& [p, labels] : seen) {
        r.rich_points.push_back({p, std::vector<std::string>(labels.begin(), labels.end())});
        for (std::size_t k = 2; k <= labels.size(); ++k) ++r.counts_by_multiplicity[k];
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<std::string> report_diff(const IncidenceReport& a, const IncidenceReport& b)
{
    std::vector<std::string> out;
    auto describe = [](const RichPoint& p) {
        std::string s = "(";
        for (std::size_t i = 0; i < p.coords.size(); ++i) s += (i ? ", " : "") + std::to_string(p.coords[i].approx());
        s += ") on";
        for (const auto& l : p.labels) s += " " + l;
        return s;
    };
    std::size_t i = 0, j = 0;
    while (i < a.rich_points.size() || j < b.rich_points.size()) {
        const int c = i == a.rich_points.size()   ? 1
                      : j == b.rich_points.size() ? -1
                                                  : compare(a.rich_points[i].coords, b.rich_points[j].coords);
        if (c < 0) {
            out.push_back("only in first: " + describe(a.rich_points[i++]));
        } else if (c > 0) {
            out.push_back("only in second: " + describe(b.rich_points[j++]));
        } else {
            if (a.rich_points[i].labels != b.rich_points[j].labels)
                out.push_back("labels differ: " + describe(a.rich_points[i]) + " vs " + describe(b.rich_points[j]));
            ++i;
            ++j;
        }
    }
    return out;
}

bool revalidate(const IncidenceReport& report, const std::vector<ParamCurve>& curves)
{
    for (const auto& p : report.rich_points) {
        if (p.multiplicity() < 2) return false;
        for (const auto& c : curves) {
            const bool listed = std::binary_search(p.labels.begin(), p.labels.end(), c.label());
            if (listed != curve_passes_through(c, p.coords)) return false;
        }
    }
    return true;
}

std::vector<ParamCurve> curves_in_variety(const std::vector<ParamCurve>& curves, const Variety& v)
{
    std::vector<ParamCurve> out;
    for (const auto& c : curves)
        if (v.contains(c)) out.push_back(c);
    return out;
}

std::vector<ParamCurve> curves_in_variety(const std::vector<ParamCurve>& curves, const MPoly& f)
{
    return curves_in_variety(curves, Variety{{f}, 3, std::max(1, f.degree()), ""});
}

namespace {

std::string curve_key(const ParamCurve& c)
{
    if (c.is_line()) return to_json(canonical_line("", c.base_point(), c.direction()))["components"].dump();
    return to_json(c)["components"].dump();
}

}  // namespace

RichCurveReport two_rich_curves(const std::vector<SurfacePatch>& surfaces, const std::vector<ParamCurve>& candidates)
{
    std::vector<const SurfacePatch*> sorted;
    for (const auto& s : surfaces) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a->label() < b->label(); });
    const bool all_flats = std::all_of(surfaces.begin(), surfaces.end(), [](const auto& s) { return s.is_flat(); });

    struct Entry {
        ParamCurve curve;
        bool supplied = false;
    };
    std::map<std::string, Entry> pool;
    for (const auto& c : candidates) {
        auto key = curve_key(c);
        auto it = pool.find(key);
        if (it == pool.end()) {
            pool.emplace(key, Entry{c, true});
        } else if (c.label() < it->second.curve.label()) {
            it->second.curve = c;
        }
    }
    if (all_flats) {
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            for (std::size_t j = i + 1; j < sorted.size(); ++j) {
                auto meet = common_line_of_flats(*sorted[i], *sorted[j]);
                if (meet.kind == FlatMeet::Kind::Coincident)
                    throw Error("identical surfaces '" + sorted[i]->label() + "' and '" + sorted[j]->label() + "'");
                if (meet.kind == FlatMeet::Kind::Line) pool.try_emplace(curve_key(*meet.line), Entry{*meet.line, false});
            }
        }
    }
    RichCurveReport report;
    report.exhaustive = all_flats;
    for (auto& [key, entry] : pool) {
        std::vector<std::string> containing;
        for (const auto* s : sorted)
            if (curve_on_surface(entry.curve, *s)) containing.push_back(s->label());
        if (containing.size() < 2) continue;
        ParamCurve curve = entry.curve;
        if (!entry.supplied)
            curve = ParamCurve(containing[0] + "&" + containing[1], curve.components());
        report.curves.push_back({std::move(curve), std::move(containing)});
    }
    return report;
}

std::size_t incidence_sum(const std::vector<SurfacePatch>& surfaces, const std::vector<ParamCurve>& candidates)
{
    std::size_t total = 0;
    for (const auto& rc : two_rich_curves(surfaces, candidates).curves) total += rc.surfaces.size();
    return total;
}

UnionBound union_bound_check(const std::vector<std::vector<std::string>>& member_sets, const Rational& c1)
{
    UnionBound u;
    std::set<std::string> all;
    u.A = member_sets.empty() ? 0 : member_sets.front().size();
    u.hypothesis_holds = true;
    const Rational needed = c1 * static_cast<long>(member_sets.size());
    for (const auto& m : member_sets) {
        u.lhs += m.size();
        all.insert(m.begin(), m.end());
        u.A = std::min(u.A, m.size());
        if (Rational(static_cast<long>(m.size())) < needed) u.hypothesis_holds = false;
    }
    u.union_size = all.size();
    u.rhs = 2 * u.union_size;
    u.inequality_holds = u.lhs <= u.rhs;
    u.min_bound = std::min(u.A * u.A, u.A * member_sets.size());
    u.measured_constant = u.min_bound == 0 ? 0.0 : static_cast<double>(u.union_size) / static_cast<double>(u.min_bound);
    return u;
}

UnionBound union_bound_check(const std::vector<SurfacePatch>& surfaces, const std::vector<ParamCurve>& curves,
                             const Rational& c1)
{
    std::vector<std::vector<std::string>> sets;
    for (const auto& s : surfaces) {
        std::vector<std::string> m;
        for (const auto& c : curves)
            if (curve_on_surface(c, s)) m.push_back(c.label());
        sets.push_back(std::move(m));
    }
    return union_bound_check(sets, c1);
}

Json to_json(const IncidenceReport& r, bool include_time)
{
    Json j;
    j["n_objects"] = r.n_objects;
    j["p2"] = r.p2();
    Json counts = Json::object();
    for (const auto& [k, c] : r.counts_by_multiplicity) counts[std::to_string(k)] = c;
    j["counts_by_multiplicity"] = std::move(counts);
    j["pair_tests"] = r.pair_tests;
    if (include_time) j["wall_time"] = r.wall_time;
    Json pts = Json::array();
    for (const auto& p : r.rich_points) pts.push_back(to_json(p));
    j["rich_points"] = std::move(pts);
    return j;
}

std::string to_csv(const IncidenceReport& r)
{
    std::ostringstream os;
    os << "point;multiplicity\n";
    for (const auto& p : r.rich_points) os << to_json(p.coords).dump() << ';' << p.multiplicity() << '\n';
    return os.str();
}

}  // namespace ilab
