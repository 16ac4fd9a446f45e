#pragma once

#include "ilab/serialize.h"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace ilab {

/// Linear: every factor has degree 1, so sign classes are the regions of a
/// hyperplane arrangement. Greedy: the smallest degree whose lift can bisect
/// every splittable class, capped by the remaining budget.
enum class DegreeSchedule { Linear, Greedy };

struct PartitionConfig {
    /// Each halving step leaves at most (1/2 + delta) of every bisected class on either side.
    Rational delta = Rational(1, 16);
    std::uint64_t seed = 0;
    int max_restarts = 64;
    int max_iterations = 80;
    DegreeSchedule schedule = DegreeSchedule::Linear;
    /// Balanced fits compared per step; the one with the smallest exact
    /// maximum class load (trace load for curves) is kept.
    int candidates = 6;
};

/// Axis-parallel box; curve traces are restricted to it.
struct Box {
    RatVec lo, hi;
};

struct HalvingStep {
    int degree = 0;
    std::size_t classes = 0;   // nonempty classes before the step
    std::size_t bisected = 0;  // classes the factor was fitted to
    /// Largest side over class size among the bisected classes.
    Rational worst_ratio;
};

struct PartitionPoly {
    std::size_t dim = 0;
    std::size_t dprime = 0;
    std::vector<MPoly> factors;
    int total_degree = 0;
    Rational imbalance_delta;
    std::vector<HalvingStep> log;
    /// Trace window used while fitting to curves.
    std::optional<Box> window;
};

/// Strict sign vector (+1 / -1) of the factors.
using Cell = std::vector<int>;

/// Halving polynomials in the first dprime coordinates, lifted to the
/// Veronese space of each step's degree. Each step bisects the largest classes. Throws when E < 1 or dprime is out
/// of range, or when no hyperplane meets the imbalance tolerance.
PartitionPoly partition_points(const std::vector<RatVec>& points, int E, std::size_t dprime,
                               const PartitionConfig& config = {});

/// Bounding box of the arrangement: lines contribute their point nearest the
/// origin, other curves their point at t = 0; padded by 1 on every side.
Box arrangement_box(const std::vector<ParamCurve>& curves);

/// Smallest rational parameter interval covering every t with gamma(t) in
/// the box (endpoints rounded outward); nullopt when gamma misses the box.
std::optional<std::pair<Rational, Rational>> clip_to_box(const ParamCurve& gamma, const Box& box);

/// Halving on one sample per curve, resampled each step at the midpoint of
/// the curve's longest parameter interval between cuts inside its window.
PartitionPoly partition_curves(const std::vector<ParamCurve>& curves, int E, const PartitionConfig& config = {},
                               std::optional<Box> box = std::nullopt);

/// nullopt when some factor vanishes at x.
std::optional<Cell> sign_cell(const PartitionPoly& p, const RatVec& x);

struct CurveTrace {
    std::set<Cell> cells;
    std::vector<bool> contained_in_factor;
    bool on_zero_set() const;
};

/// Exact set of cells met by gamma(t) for t in the open range.
CurveTrace curve_cell_trace(const PartitionPoly& p, const ParamCurve& gamma, const std::pair<Rational, Rational>& t_range);

/// Cells a curve of degree deg can visit: 1 + sum of deg(factor) * deg.
std::size_t bezout_trace_bound(const PartitionPoly& p, int curve_degree);

struct PartitionAudit {
    std::size_t objects = 0;
    std::size_t objects_on_zero_set = 0;
    std::map<Cell, std::size_t> loads;
    std::size_t max_cell_load = 0;
    std::size_t nonempty_cells = 0;
    /// Object count over E^(dprime) for points, E^(d - 1) for curves.
    double budget = 0;
    double measured_constant = 0;
    std::size_t sign_cell_limit = 0;  // 2^|factors|
    bool within_sign_cell_limit = false;
    /// Every off-zero-set object in a single cell, or every object on Z(P).
    bool degenerate = false;
    /// Curves only: every trace within the Bezout bound.
    bool traces_within_bezout = true;
    std::size_t objects_outside_window = 0;
};

PartitionAudit partition_audit(const PartitionPoly& p, const std::vector<RatVec>& points, int E);
/// Traces each curve over its window in the box (default: p.window, else
/// arrangement_box); curves missing the box are counted separately.
PartitionAudit partition_audit(const PartitionPoly& p, const std::vector<ParamCurve>& curves, int E,
                               std::optional<Box> box = std::nullopt, unsigned threads = 1);

Json to_json(const PartitionPoly& p);
Json to_json(const PartitionAudit& a);
/// Rows "cell;load" with cells written as strings of + and -.
std::string audit_csv(const PartitionAudit& a);

}  // namespace ilab
