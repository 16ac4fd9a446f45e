#include "ilab/arrangements.h"

#include "ilab/linalg.h"

#include <fstream>
#include <set>
#include <sstream>

namespace ilab {

long Rng::uniform(long lo, long hi)
{
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % range);
}

RatVec Rng::vector(std::size_t d, long bound)
{
    RatVec v(d);
    for (auto& x : v) x = uniform(-bound, bound);
    return v;
}

RatVec Rng::nonzero_vector(std::size_t d, long bound)
{
    while (true) {
        RatVec v = vector(d, bound);
        for (const auto& x : v)
            if (x != 0) return v;
    }
}

void Arrangement::validate() const
{
    std::set<std::string> labels;
    for (const auto& c : curves) {
        if (c.dim() != dim) throw Error("curve '" + c.label() + "' has the wrong dimension");
        if (!labels.insert(c.label()).second) throw Error("duplicate label '" + c.label() + "'");
    }
    for (const auto& s : surfaces) {
        if (s.dim() != dim) throw Error("surface '" + s.label() + "' has the wrong dimension");
        if (!labels.insert(s.label()).second) throw Error("duplicate label '" + s.label() + "'");
    }
}

namespace {

constexpr int kMaxRetries = 1000;

std::string label_for(const std::string& prefix, std::size_t i, std::size_t n)
{
    std::string digits = std::to_string(i);
    const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
    return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

Json provenance(const std::string& generator, std::uint64_t seed, Json params)
{
    Json j;
    j["generator"] = generator;
    j["seed"] = seed;
    j["params"] = std::move(params);
    return j;
}

using LineKey = std::pair<RatVec, RatVec>;

LineKey line_key(const ParamCurve& l) { return {l.base_point(), l.direction()}; }

// Distinct integers from [lo, hi] in draw order.
std::vector<long> distinct_values(Rng& rng, std::size_t count, long lo, long hi)
{
    std::vector<long> pool;
    for (long v = lo; v <= hi; ++v) pool.push_back(v);
    if (pool.size() < count) throw Error("not enough distinct values");
    for (std::size_t i = 0; i < count; ++i) {
        auto j = static_cast<std::size_t>(rng.uniform(static_cast<long>(i), static_cast<long>(pool.size()) - 1));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

RatVec combine(const std::vector<RatVec>& basis, const RatVec& coef)
{
    RatVec v(basis.front().size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += coef[j] * basis[j][i];
    return v;
}

struct Hyperplane {
    RatVec normal;
    Rational constant;  // normal . x + constant = 0
    std::vector<RatVec> directions;
};

Hyperplane hyperplane_of(const MPoly& f)
{
    if (f.degree() != 1) throw Error("expected an affine hyperplane");
    const std::size_t d = f.nvars();
    Hyperplane h;
    h.normal.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        Exponent e(d, 0);
        e[i] = 1;
        h.normal[i] = f.coeff(e);
    }
    h.constant = f.coeff(Exponent(d, 0));
    h.directions = nullspace({h.normal}, d);
    return h;
}

RatVec point_on(const Hyperplane& h, Rng& rng, long bound)
{
    std::size_t pivot = 0;
    while (h.normal[pivot] == 0) ++pivot;
    RatVec p = rng.vector(h.normal.size(), bound);
    p[pivot] = 0;
    p[pivot] = -(dot(h.normal, p) + h.constant) / h.normal[pivot];
    return p;
}

std::string flat_key(const SurfacePatch& s)
{
    Json j = Json::array();
    for (const auto& g : s.implicit_generators()) j.push_back(to_json(g));
    return j.dump();
}

}  // namespace

Arrangement gen_random_lines(std::size_t d, std::size_t n, long coord_bound, std::uint64_t seed)
{
    if (n < 1 || coord_bound < 1 || d < 2) throw Error("gen_random_lines: need n >= 1, coord_bound >= 1, d >= 2");
    Rng rng(seed);
    Arrangement a;
    a.dim = d;
    std::set<LineKey> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRetries) throw Error("gen_random_lines: could not draw distinct lines");
            ParamCurve l = canonical_line(label_for("L", i, n), rng.vector(d, coord_bound), rng.nonzero_vector(d, coord_bound));
            if (seen.insert(line_key(l)).second) {
                a.curves.push_back(std::move(l));
                break;
            }
        }
    }
    a.provenance = provenance("random-lines", seed, {{"dim", d}, {"n", n}, {"coord_bound", coord_bound}});
    return a;
}

Arrangement gen_regulus_lines(std::size_t n_per_ruling, std::uint64_t seed)
{
    if (n_per_ruling < 1) throw Error("gen_regulus_lines: need n_per_ruling >= 1");
    Rng rng(seed);
    const long span = 5 * static_cast<long>(n_per_ruling) + 5;
    auto as = distinct_values(rng, n_per_ruling, -span, span);
    auto bs = distinct_values(rng, n_per_ruling, -span, span);
    Arrangement a;
    a.dim = 3;
    for (std::size_t i = 0; i < n_per_ruling; ++i) {
        const Rational v = as[i];
        a.curves.emplace_back(label_for("a", i, n_per_ruling),
                              std::vector<UPoly>{UPoly::constant(v), UPoly::identity(), UPoly::linear(0, v)});
    }
    for (std::size_t i = 0; i < n_per_ruling; ++i) {
        const Rational v = bs[i];
        a.curves.emplace_back(label_for("b", i, n_per_ruling),
                              std::vector<UPoly>{UPoly::identity(), UPoly::constant(v), UPoly::linear(0, v)});
    }
    a.provenance = provenance("regulus", seed, {{"n_per_ruling", n_per_ruling}});
    return a;
}

Arrangement gen_lines_in_flat(std::size_t d, std::size_t n, const SurfacePatch& flat, std::uint64_t seed, bool common_point)
{
    if (!flat.is_flat() || flat.dim() != d) throw Error("gen_lines_in_flat: expected a 2-flat in R^d");
    Rng rng(seed);
    const long bound = 10 + static_cast<long>(n);
    struct Line2 {
        Rational a, b, g, h;  // base (a, b), direction (g, h)
    };
    std::vector<Line2> lines;
    std::set<std::pair<Rational, Rational>> crossings;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRetries) throw Error("gen_lines_in_flat: could not draw a generic line");
            Line2 c{0, 0, rng.uniform(-bound, bound), rng.uniform(-bound, bound)};
            if (!common_point) {
                c.a = rng.uniform(-bound, bound);
                c.b = rng.uniform(-bound, bound);
            }
            if (c.g == 0 && c.h == 0) continue;
            bool ok = true;
            std::vector<std::pair<Rational, Rational>> fresh;
            for (const auto& l : lines) {
                const Rational cross = l.g * c.h - l.h * c.g;
                if (cross == 0) {
                    ok = false;
                    break;
                }
                // l.base + s l.dir = c.base + t c.dir
                const Rational s = ((c.a - l.a) * c.h - (c.b - l.b) * c.g) / cross;
                std::pair<Rational, Rational> p{l.a + s * l.g, l.b + s * l.h};
                if (!common_point && crossings.count(p)) {
                    ok = false;
                    break;
                }
                fresh.push_back(p);
            }
            if (!ok) continue;
            crossings.insert(fresh.begin(), fresh.end());
            lines.push_back(c);
            break;
        }
    }
    Arrangement a;
    a.dim = d;
    for (std::size_t i = 0; i < n; ++i) {
        RatVec p(d), w(d);
        for (std::size_t k = 0; k < d; ++k) {
            p[k] = flat.flat_point()[k] + lines[i].a * flat.flat_u()[k] + lines[i].b * flat.flat_v()[k];
            w[k] = lines[i].g * flat.flat_u()[k] + lines[i].h * flat.flat_v()[k];
        }
        a.curves.push_back(canonical_line(label_for("P", i, n), p, w));
    }
    a.provenance = provenance("lines-in-flat", seed,
                              {{"dim", d}, {"n", n}, {"flat", to_json(flat)}, {"common_point", common_point}});
    return a;
}

Arrangement gen_grid_lines(std::size_t k)
{
    if (k < 2) throw Error("gen_grid_lines: need k >= 2");
    Arrangement a;
    a.dim = 3;
    const char* names[3] = {"x", "y", "z"};
    for (std::size_t axis = 0; axis < 3; ++axis) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                std::vector<UPoly> comps(3);
                std::size_t other[2] = {(axis + 1) % 3, (axis + 2) % 3};
                comps[axis] = UPoly::identity();
                comps[other[0]] = UPoly::constant(static_cast<long>(i));
                comps[other[1]] = UPoly::constant(static_cast<long>(j));
                a.curves.emplace_back(std::string(names[axis]) + label_for("_", i, k) + label_for("_", j, k), comps);
            }
        }
    }
    a.provenance = provenance("grid", 0, {{"k", k}});
    return a;
}

Arrangement gen_lines_in_hypersurface(const MPoly& f, std::size_t n, std::uint64_t seed)
{
    const std::size_t d = f.nvars();
    Rng rng(seed);
    const long bound = 10 + static_cast<long>(n);
    Arrangement a;
    a.dim = d;
    std::set<LineKey> seen;
    auto accept = [&](const ParamCurve& l) {
        if (!curve_contained_in(l, f)) throw Error("gen_lines_in_hypersurface: generated line left the hypersurface");
        return seen.insert(line_key(l)).second;
    };
    if (f.degree() == 1) {
        Hyperplane h = hyperplane_of(f);
        for (std::size_t i = 0; i < n; ++i) {
            for (int attempt = 0;; ++attempt) {
                if (attempt == kMaxRetries) throw Error("gen_lines_in_hypersurface: could not draw distinct lines");
                RatVec dir = combine(h.directions, rng.vector(h.directions.size(), 5));
                if (dir == RatVec(d)) continue;
                ParamCurve l = canonical_line(label_for("H", i, n), point_on(h, rng, bound), dir);
                if (accept(l)) {
                    a.curves.push_back(std::move(l));
                    break;
                }
            }
        }
    } else {
        // a x_i x_j + b x_k with i, j, k distinct.
        const auto& terms = f.terms();
        std::size_t vi = d, vj = d, vk = d;
        Rational alpha, beta;
        if (terms.size() == 2) {
            for (const auto& [e, c] : terms) {
                std::vector<std::size_t> ones;
                for (std::size_t m = 0; m < d; ++m)
                    if (e[m] == 1) ones.push_back(m);
                if (total_degree(e) == 2 && ones.size() == 2) {
                    vi = ones[0];
                    vj = ones[1];
                    alpha = c;
                } else if (total_degree(e) == 1) {
                    vk = ones[0];
                    beta = c;
                }
            }
        }
        if (vi == d || vk == d || vk == vi || vk == vj) throw Error("gen_lines_in_hypersurface: unsupported hypersurface");
        const Rational kappa = -alpha / beta;
        for (std::size_t i = 0; i < n; ++i) {
            for (int attempt = 0;; ++attempt) {
                if (attempt == kMaxRetries) throw Error("gen_lines_in_hypersurface: could not draw distinct lines");
                const bool first = i % 2 == 0;
                const Rational c = rng.uniform(-bound, bound);
                std::vector<UPoly> comps(d);
                for (std::size_t m = 0; m < d; ++m)
                    comps[m] = UPoly::linear(rng.uniform(-bound, bound), rng.uniform(-3, 3));
                comps[first ? vi : vj] = UPoly::constant(c);
                comps[first ? vj : vi] = UPoly::identity();
                comps[vk] = UPoly::linear(0, kappa * c);
                ParamCurve l(label_for("H", i, n), comps);
                if (accept(l)) {
                    a.curves.push_back(std::move(l));
                    break;
                }
            }
        }
    }
    a.provenance = provenance("lines-in-hypersurface", seed, {{"f", to_json(f)}, {"n", n}});
    return a;
}

Arrangement gen_flats_in_hyperplane(std::size_t n, const MPoly& hyperplane, std::uint64_t seed)
{
    if (hyperplane.nvars() != 4) throw DimensionMismatch("gen_flats_in_hyperplane: expected a hyperplane in R^4");
    Hyperplane h = hyperplane_of(hyperplane);
    Rng rng(seed);
    Arrangement a;
    a.dim = 4;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRetries) throw Error("gen_flats_in_hyperplane: could not draw distinct flats");
            RatVec u = combine(h.directions, rng.vector(3, 5)), v = combine(h.directions, rng.vector(3, 5));
            if (rank({u, v}, 4) < 2) continue;
            auto s = SurfacePatch::flat(label_for("F", i, n), point_on(h, rng, 10), u, v);
            if (seen.insert(flat_key(s)).second) {
                a.surfaces.push_back(std::move(s));
                break;
            }
        }
    }
    a.provenance = provenance("flats-in-hyperplane", seed, {{"n", n}, {"hyperplane", to_json(hyperplane)}});
    return a;
}

Arrangement gen_random_flats(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    Arrangement a;
    a.dim = 4;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRetries) throw Error("gen_random_flats: could not draw distinct flats");
            RatVec u = rng.vector(4, 5), v = rng.vector(4, 5);
            if (rank({u, v}, 4) < 2) continue;
            auto s = SurfacePatch::flat(label_for("F", i, n), rng.vector(4, 10), u, v);
            if (seen.insert(flat_key(s)).second) {
                a.surfaces.push_back(std::move(s));
                break;
            }
        }
    }
    a.provenance = provenance("random-flats", seed, {{"n", n}});
    return a;
}

Arrangement gen_flats_through_line(std::size_t n, const ParamCurve& line, std::uint64_t seed)
{
    if (!line.is_line() || line.dim() != 4) throw Error("gen_flats_through_line: expected a line in R^4");
    Rng rng(seed);
    Arrangement a;
    a.dim = 4;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRetries) throw Error("gen_flats_through_line: could not draw distinct flats");
            RatVec v = rng.vector(4, 5);
            if (rank({line.direction(), v}, 4) < 2) continue;
            auto s = SurfacePatch::flat(label_for("F", i, n), line.base_point(), line.direction(), v);
            if (seen.insert(flat_key(s)).second) {
                a.surfaces.push_back(std::move(s));
                break;
            }
        }
    }
    a.provenance = provenance("flats-through-line", seed, {{"n", n}, {"line", to_json(line)}});
    return a;
}

Arrangement gen_random_conics(std::size_t d, std::size_t n, long coord_bound, std::uint64_t seed)
{
    Rng rng(seed);
    Arrangement a;
    a.dim = d;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRetries) throw Error("gen_random_conics: could not draw distinct conics");
            std::vector<UPoly> comps;
            for (std::size_t k = 0; k < d; ++k) {
                RatVec c = rng.vector(3, coord_bound);
                if (c[2] == 0) c[2] = 1;
                comps.emplace_back(c);
            }
            ParamCurve c(label_for("C", i, n), comps);
            Json key = to_json(c)["components"];
            if (seen.insert(key.dump()).second) {
                a.curves.push_back(std::move(c));
                break;
            }
        }
    }
    a.provenance = provenance("random-conics", seed, {{"dim", d}, {"n", n}, {"coord_bound", coord_bound}});
    return a;
}

Arrangement merge(const Arrangement& a, const Arrangement& b, const std::string& prefix_a, const std::string& prefix_b)
{
    if (a.dim != b.dim) throw DimensionMismatch("merging arrangements of different dimensions");
    Arrangement m;
    m.dim = a.dim;
    for (const auto& c : a.curves) m.curves.emplace_back(prefix_a + c.label(), c.components());
    for (const auto& c : b.curves) m.curves.emplace_back(prefix_b + c.label(), c.components());
    auto relabel = [](const SurfacePatch& s, const std::string& prefix) {
        Json j = to_json(s);
        j["label"] = prefix + s.label();
        return surface_from_json(j);
    };
    for (const auto& s : a.surfaces) m.surfaces.push_back(relabel(s, prefix_a));
    for (const auto& s : b.surfaces) m.surfaces.push_back(relabel(s, prefix_b));
    m.provenance = {{"generator", "merge"}, {"parts", Json::array({a.provenance, b.provenance})}};
    m.validate();
    return m;
}

Json arrangement_to_json(const Arrangement& a)
{
    Json curves = Json::array(), surfaces = Json::array();
    for (const auto& c : a.curves) curves.push_back(to_json(c));
    for (const auto& s : a.surfaces) surfaces.push_back(to_json(s));
    Json j;
    j["dim"] = a.dim;
    j["curves"] = std::move(curves);
    j["surfaces"] = std::move(surfaces);
    j["provenance"] = a.provenance;
    return j;
}

Arrangement arrangement_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned())
        throw ParseError("arrangement needs a non-negative integer 'dim'");
    Arrangement a;
    a.dim = j["dim"].get<std::size_t>();
    if (j.contains("curves")) {
        if (!j["curves"].is_array()) throw ParseError("'curves' must be an array");
        for (const auto& c : j["curves"]) a.curves.push_back(curve_from_json(c));
    }
    if (j.contains("surfaces")) {
        if (!j["surfaces"].is_array()) throw ParseError("'surfaces' must be an array");
        for (const auto& s : j["surfaces"]) a.surfaces.push_back(surface_from_json(s));
    }
    if (j.contains("provenance")) a.provenance = j["provenance"];
    a.validate();
    return a;
}

void save(const Arrangement& a, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << arrangement_to_json(a).dump(2) << '\n';
}

Arrangement load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON in '") + path + "': " + e.what());
    }
    try {
        return arrangement_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid arrangement in '") + path + "': " + e.what());
    }
}

}  // namespace ilab
