#pragma once

#include "ilab/serialize.h"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ilab {

/// Sign of x - coeff * n^e, decided exactly: with e = p/q, compare
/// (x / coeff)^q against n^p. Requires x >= 0 and coeff > 0.
int compare_power(const Rational& x, const Rational& coeff, std::size_t n, const Rational& e);
/// Smallest integer >= coeff * n^e.
std::size_t ceil_power(const Rational& coeff, std::size_t n, const Rational& e);
double power_value(const Rational& coeff, std::size_t n, const Rational& e);

struct DecompConfig {
    /// 0 < epsilon < 1/3.
    Rational epsilon = Rational(1, 10);
    /// Linear factors per partition step.
    int E = 4;
    std::size_t base_case_n = 8;
    /// Hypersurfaces survive when |L*_M| > M_prune_factor * n^(2/3 + eps).
    Rational M_prune_factor = Rational(2);
    /// Surfaces survive when |L_S| > S_prune_C2 * n^(1/3 + 2 eps).
    Rational S_prune_C2 = Rational(1);
    /// Exponent applied to n^(2/3 - 2 eps) for the surface clustering
    /// threshold; default 1/2 + eps/2.
    std::optional<Rational> A_exponent;
    /// Degree split of S4; default 100 D^2.
    std::optional<int> degcap_surface;
    /// Largest degree searched when clustering into hypersurfaces.
    int degcap_hyper = 2;
    /// Largest degree searched when clustering curves into surfaces inside a 3-space.
    int surface_search_degree = 2;
    /// Balanced fits compared per partition step.
    int partition_candidates = 2;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    /// Throws on out-of-range fields.
    void validate() const;
};

struct Member {
    Variety variety;
    /// Sorted curve labels contained in the variety.
    std::vector<std::string> curves;
};

struct Decomposition {
    std::size_t dim = 0;
    std::size_t n = 0;
    Rational epsilon;
    std::vector<Member> M;
    std::vector<Member> S;
    std::vector<RichPoint> residual_rich_points;
    /// Top-level stage cardinalities, in pipeline order.
    std::vector<std::pair<std::string, std::size_t>> stage_log;
    /// Some surface was kept whole because its factorization is incomplete.
    bool incomplete_components = false;
};

/// Curves in R^3: surfaces holding >= 2 n^(1/2 + eps) curves each.
Decomposition decompose_r3(const std::vector<ParamCurve>& curves, const DecompConfig& cfg = {});
/// Curves in R^4: hypersurfaces M and 2-dimensional varieties S.
Decomposition decompose_r4(const std::vector<ParamCurve>& curves, const DecompConfig& cfg = {});

/// Two-rich points of L lying on some M with two of their curves in L_M,
/// but neither two curves in L*_M = L_M minus every L_S, nor two in any L_S.
std::size_t hybrid_points(const std::vector<ParamCurve>& curves, const std::vector<Variety>& M,
                          const std::vector<Variety>& S, unsigned threads = 1);

struct ContractCheck {
    std::string name;
    bool holds = false;
    /// Worst observed value and the bound it was compared with.
    double measured = 0;
    double bound = 0;
};

struct AuditReport {
    std::size_t n = 0;
    std::size_t dim = 0;
    Rational epsilon;
    /// Every listed member lies on its variety.
    bool containment = false;
    /// Listed members are exactly the curves contained in each variety.
    bool membership_complete = false;
    /// The stored residual equals the recount.
    bool residual_exact = false;
    /// P2(L) = residual + P2(L_M) + P2(L_S) as sets.
    bool soundness = false;
    std::vector<ContractCheck> contracts;
    std::size_t residual = 0;
    /// residual / n^(4/3 + 3 eps) in R^4, residual / n^(3/2 + eps) in R^3.
    double C_meas = 0;

    bool sound() const { return containment && residual_exact && soundness; }
};

/// Rechecks everything from L and dec alone. Throws when dec names a curve
/// that is not in L.
AuditReport audit_decomposition(const std::vector<ParamCurve>& curves, const Decomposition& dec, const Rational& epsilon,
                                unsigned threads = 1);

Json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);
Json to_json(const AuditReport& a);
/// Aligned two-column table of the stage log.
std::string stage_table(const Decomposition& d);

}  // namespace ilab
