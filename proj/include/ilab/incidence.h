#pragma once

#include "ilab/serialize.h"

#include <map>
#include <string>
#include <vector>

namespace ilab {

struct IncidenceReport {
    std::size_t n_objects = 0;
    /// Distinct points on >= 2 curves, in lexicographic coordinate order.
    std::vector<RichPoint> rich_points;
    /// k -> number of points on at least k curves.
    std::map<std::size_t, std::size_t> counts_by_multiplicity;
    std::size_t pair_tests = 0;
    double wall_time = 0;

    std::size_t p2() const { return rich_points.size(); }
};

/// Exact two-rich points. Pairs are tested in label order and merged
/// deterministically regardless of thread count. Throws on identical curves.
IncidenceReport two_rich_points(const std::vector<ParamCurve>& curves, unsigned threads = 1);

/// Every rich point lies on each of its listed curves and on no unlisted one.
/// Reference path: every pair in input order, each intersection point
/// deduplicated by a linear scan with exact comparison.
IncidenceReport two_rich_points_brute_force(const std::vector<ParamCurve>& curves);

/// Human-readable differences between two reports' point sets and labels;
/// empty when they agree.
std::vector<std::string> report_diff(const IncidenceReport& a, const IncidenceReport& b);

bool revalidate(const IncidenceReport& report, const std::vector<ParamCurve>& curves);

std::vector<ParamCurve> curves_in_variety(const std::vector<ParamCurve>& curves, const Variety& v);
std::vector<ParamCurve> curves_in_variety(const std::vector<ParamCurve>& curves, const MPoly& f);

struct RichCurve {
    ParamCurve curve;
    std::vector<std::string> surfaces;  // sorted labels
};

struct RichCurveReport {
    std::vector<RichCurve> curves;
    /// True when every surface is a flat; otherwise the result is exhaustive
    /// only relative to the candidate list.
    bool exhaustive = false;
};

/// Curves contained in at least two surfaces. With flats only, all pairwise
/// common lines join the candidates and the output order and labels do not
/// depend on candidate order.
RichCurveReport two_rich_curves(const std::vector<SurfacePatch>& surfaces, const std::vector<ParamCurve>& candidates);

std::size_t incidence_sum(const std::vector<SurfacePatch>& surfaces, const std::vector<ParamCurve>& candidates);

struct UnionBound {
    bool hypothesis_holds = false;
    std::size_t lhs = 0;         // sum of |L_S|
    std::size_t union_size = 0;  // |union of L_S|
    std::size_t rhs = 0;         // 2 |union|
    bool inequality_holds = false;
    std::size_t A = 0;           // min |L_S|
    std::size_t min_bound = 0;   // min(A^2, A |S|)
    /// union_size / min_bound; the lower bound holds up to this constant.
    double measured_constant = 0;
};

/// Each surface's curve set L_S is computed exactly. The inequality is
/// reported always and is asserted by callers only when the hypothesis holds.
UnionBound union_bound_check(const std::vector<SurfacePatch>& surfaces, const std::vector<ParamCurve>& curves,
                             const Rational& c1);

/// Same check from precomputed member sets.
UnionBound union_bound_check(const std::vector<std::vector<std::string>>& member_sets, const Rational& c1);

Json to_json(const IncidenceReport& r, bool include_time = false);
/// CSV rows "coords;multiplicity" with algebraic coordinates as JSON.
std::string to_csv(const IncidenceReport& r);

}  // namespace ilab
