#pragma once

#include "ilab/geometry.h"
#include "ilab/serialize.h"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ilab {

struct VanishingPolynomial {
    int k = 0;
    /// Primitive; the first kernel vector in graded monomial order.
    MPoly poly;
    /// Evaluation matrix size at degree k.
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// Lowest-degree nonzero polynomial (degree <= kmax) vanishing on every
/// object. Samples: k*deg + 1 parameters 0, 1, ... per curve and the
/// (k*deg + 1)^2 integer grid per surface, enough to force exact containment.
/// Throws when kmax < 1 or dimensions differ.
std::optional<VanishingPolynomial> min_vanishing_polynomial(const std::vector<ParamCurve>& curves, int kmax,
                                                            unsigned threads = 1);
std::optional<VanishingPolynomial> min_vanishing_polynomial(const std::vector<SurfacePatch>& surfaces, int kmax,
                                                            unsigned threads = 1);

struct Cluster {
    MPoly poly;
    int degree = 0;
    /// Sorted.
    std::vector<std::string> members;
};

struct ClusterResult {
    std::vector<Cluster> hypersurfaces;
    std::vector<std::string> residual;
    /// Passes of the outer loop, the last one accepting nothing.
    std::size_t iterations = 0;
    std::size_t A_used = 0;
    int degcap = 0;
};

/// Greedy growth: from each unassigned seed in label order, add every object
/// (label order) that keeps a vanishing polynomial of degree <= degcap.
/// The first cluster reaching A members is accepted and the loop restarts.
ClusterResult cluster_hypersurfaces(const std::vector<SurfacePatch>& surfaces, std::size_t A, int degcap);
ClusterResult cluster_hypersurfaces(const std::vector<ParamCurve>& curves, std::size_t A, int degcap);

/// An object known through sample points: a polynomial of degree k that
/// vanishes on samples(k) must contain the object. Certifying that is the
/// caller's job.
struct SampledObject {
    std::string label;
    std::size_t dim = 0;
    std::function<std::vector<RatVec>(int)> samples;
};

std::optional<VanishingPolynomial> min_vanishing_polynomial(const std::vector<SampledObject>& objects, int kmax,
                                                            unsigned threads = 1);
ClusterResult cluster_hypersurfaces(const std::vector<SampledObject>& objects, std::size_t A, int degcap);

/// max(1, floor(n / (2A))): degree of the low-degree reduction.
int reduction_degcap(std::size_t n, std::size_t A);
/// 100 D^2: degree allowed for clustering around curves of degree D.
int clustering_degcap(int D);

struct DegreeAudit {
    std::size_t curves = 0;
    std::size_t p2 = 0;
    /// Largest curve degree.
    int D = 0;
    int surface_degree = 0;
    /// |P2(L)| >= C1 |L|.
    bool hypothesis = false;
    /// deg(S) <= 100 D^2.
    bool degree_ok = false;
    /// "ok", "violation" or "not applicable".
    std::string status() const;
};

/// Throws when some curve does not lie on s.
DegreeAudit rich_curve_degree_audit(const SurfacePatch& s, const std::vector<ParamCurve>& curves, const Rational& c1,
                                    unsigned threads = 1);

Json to_json(const VanishingPolynomial& v);
Json to_json(const ClusterResult& r);
Json to_json(const DegreeAudit& a);

}  // namespace ilab
