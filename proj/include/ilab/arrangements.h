#pragma once

#include "ilab/serialize.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ilab {

struct Arrangement {
    std::size_t dim = 0;
    std::vector<ParamCurve> curves;
    std::vector<SurfacePatch> surfaces;
    /// {"generator": name, "seed": s, "params": {...}}
    Json provenance = Json::object();

    /// Throws on duplicate labels or mixed dimensions.
    void validate() const;
};

/// Platform-independent uniform draws (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi);
    RatVec vector(std::size_t d, long bound);
    /// Nonzero vector with entries in [-bound, bound].
    RatVec nonzero_vector(std::size_t d, long bound);

private:
    std::mt19937_64 engine_;
};

Arrangement gen_random_lines(std::size_t d, std::size_t n, long coord_bound, std::uint64_t seed);
/// Lines (a, t, a t) and (t, b, b t) on z = xy.
Arrangement gen_regulus_lines(std::size_t n_per_ruling, std::uint64_t seed);
/// Generic lines inside the flat: no two parallel and no three concurrent;
/// with common_point every line passes through the flat's base point.
Arrangement gen_lines_in_flat(std::size_t d, std::size_t n, const SurfacePatch& flat, std::uint64_t seed,
                              bool common_point = false);
/// 3k^2 axis-parallel lines through {0..k-1}^3.
Arrangement gen_grid_lines(std::size_t k);
/// Supported f: affine hyperplanes, and a*x_i*x_j + b*x_k with i, j, k distinct
/// (both rulings, the remaining coordinates drawn freely).
Arrangement gen_lines_in_hypersurface(const MPoly& f, std::size_t n, std::uint64_t seed);
Arrangement gen_flats_in_hyperplane(std::size_t n, const MPoly& hyperplane, std::uint64_t seed);
Arrangement gen_random_flats(std::size_t n, std::uint64_t seed);
/// n flats in R^4 containing the given line.
Arrangement gen_flats_through_line(std::size_t n, const ParamCurve& line, std::uint64_t seed);
/// Random parametrized conics t -> (q_1(t), ..., q_d(t)), every q_i quadratic.
Arrangement gen_random_conics(std::size_t d, std::size_t n, long coord_bound, std::uint64_t seed);

/// Concatenation with labels prefixed "<prefix_a>" / "<prefix_b>".
Arrangement merge(const Arrangement& a, const Arrangement& b, const std::string& prefix_a, const std::string& prefix_b);

Json arrangement_to_json(const Arrangement& a);
Arrangement arrangement_from_json(const Json& j);
void save(const Arrangement& a, const std::string& path);
/// Throws ParseError on malformed content, Error on invalid geometry.
Arrangement load(const std::string& path);

}  // namespace ilab
