#include "ilab/arrangements.h"
#include "ilab/complexlab.h"
#include "ilab/incidence.h"
#include "ilab/parallel.h"
#include "ilab/partition.h"
#include "ilab/reduction.h"
#include "ilab/structure.h"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ilab;

namespace {

constexpr int kAuditFailure = 1;
constexpr int kInputError = 2;

/// Failure of a check the command was asked to make (exit code 1).
struct AuditFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string input;
    std::string output;
    std::string format = "json";
    unsigned threads = 0;
    std::uint64_t seed = 0;
};

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Rational rational_flag(const std::string& name, const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const ParseError& e) {
        throw ParseError("--" + name + ": " + e.what());
    }
}

// Comma-separated rationals or integers.
std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct PointSet {
    std::size_t dim = 0;
    std::vector<RatVec> points;
    Json provenance = Json::object();
};

Json point_set_to_json(const PointSet& p)
{
    Json j;
    j["dim"] = p.dim;
    Json pts = Json::array();
    for (const auto& x : p.points) pts.push_back(to_json(x));
    j["points"] = std::move(pts);
    j["provenance"] = p.provenance;
    return j;
}

PointSet point_set_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("dim") || !j.contains("points")) throw ParseError("point file needs dim and points");
    PointSet p;
    p.dim = j.at("dim").get<std::size_t>();
    for (const auto& x : j.at("points")) {
        p.points.push_back(ratvec_from_json(x));
        if (p.points.back().size() != p.dim) throw ParseError("point of the wrong dimension");
    }
    if (j.contains("provenance")) p.provenance = j.at("provenance");
    return p;
}

bool is_point_file(const Json& j) { return j.is_object() && j.contains("points") && !j.contains("curves"); }

// ---------------------------------------------------------------- gen

struct GenArgs {
    Common c;
    std::string kind;
    std::size_t n = 10;
    std::size_t dim = 3;
    long bound = 100;
};

Arrangement generate(const GenArgs& a)
{
    const auto& k = a.kind;
    if (k == "random-lines") return gen_random_lines(a.dim, a.n, a.bound, a.c.seed);
    if (k == "regulus") return gen_regulus_lines(a.n, a.c.seed);
    if (k == "grid") return gen_grid_lines(a.n);
    if (k == "random-conics") return gen_random_conics(a.dim, a.n, a.bound, a.c.seed);
    if (k == "random-flats") return gen_random_flats(a.n, a.c.seed);
    if (k == "lines-in-hyperplane") return gen_lines_in_hypersurface(MPoly::variable(a.dim, a.dim - 1), a.n, a.c.seed);
    if (k == "flats-in-hyperplane") return gen_flats_in_hyperplane(a.n, MPoly::variable(4, 3), a.c.seed);
    if (k == "lines-in-flat") {
        RatVec p(a.dim, Rational(0)), u(a.dim, Rational(0)), v(a.dim, Rational(0));
        u[0] = 1;
        v[1] = 1;
        return gen_lines_in_flat(a.dim, a.n, SurfacePatch::flat("F", p, u, v), a.c.seed);
    }
    throw ParseError("unknown generator '" + k + "'");
}

int cmd_gen(const GenArgs& a)
{
    if (a.kind == "random-points") {
        Rng rng(a.c.seed);
        PointSet p;
        p.dim = a.dim;
        for (std::size_t i = 0; i < a.n; ++i) p.points.push_back(rng.vector(a.dim, a.bound));
        p.provenance = {{"generator", "random-points"}, {"seed", a.c.seed}, {"params", {{"dim", a.dim}, {"n", a.n}, {"coord_bound", a.bound}}}};
        write_json(a.c.output, point_set_to_json(p));
        return 0;
    }
    const Arrangement arr = generate(a);
    write_json(a.c.output, arrangement_to_json(arr));
    return 0;
}

// ---------------------------------------------------------------- count

struct CountArgs {
    Common c;
    bool oracle = false;
};

int cmd_count(const CountArgs& a)
{
    const Arrangement arr = load(a.c.input);
    const unsigned threads = resolve_threads(a.c.threads);
    const IncidenceReport r = two_rich_points(arr.curves, threads);
    std::vector<std::string> diff;
    if (a.oracle) diff = report_diff(r, two_rich_points_brute_force(arr.curves));
    if (a.c.format == "csv") {
        write_text(a.c.output, to_csv(r));
    } else {
        Json j = to_json(r);
        j["config"] = {{"command", "count"}, {"input", a.c.input}, {"oracle", a.oracle}, {"source", arr.provenance}};
        if (a.oracle) j["oracle_diff"] = diff;
        write_json(a.c.output, j);
    }
    for (const auto& d : diff) std::cerr << d << '\n';
    if (!diff.empty()) throw AuditFailure("two_rich_points disagrees with the brute-force counter");
    return 0;
}

// ---------------------------------------------------------------- partition

struct PartitionArgs {
    Common c;
    int E = 4;
    std::string delta = "1/16";
    std::size_t dprime = 0;
    int candidates = 6;
    std::string schedule = "linear";
};

int cmd_partition(const PartitionArgs& a)
{
    PartitionConfig cfg;
    cfg.delta = rational_flag("delta", a.delta);
    cfg.seed = a.c.seed;
    cfg.candidates = a.candidates;
    if (a.schedule == "linear") cfg.schedule = DegreeSchedule::Linear;
    else if (a.schedule == "greedy") cfg.schedule = DegreeSchedule::Greedy;
    else throw ParseError("--schedule must be linear or greedy");

    const Json in = read_json(a.c.input);
    PartitionPoly p;
    PartitionAudit audit;
    if (is_point_file(in)) {
        const PointSet pts = point_set_from_json(in);
        p = partition_points(pts.points, a.E, a.dprime == 0 ? pts.dim : a.dprime, cfg);
        audit = partition_audit(p, pts.points, a.E);
    } else {
        const Arrangement arr = arrangement_from_json(in);
        p = partition_curves(arr.curves, a.E, cfg);
        audit = partition_audit(p, arr.curves, a.E, std::nullopt, resolve_threads(a.c.threads));
    }
    if (a.c.format == "csv") {
        write_text(a.c.output, audit_csv(audit));
        return 0;
    }
    Json j;
    j["config"] = {{"command", "partition"}, {"input", a.c.input}, {"E", a.E}, {"delta", to_json(cfg.delta)},
                   {"seed", a.c.seed}, {"candidates", a.candidates}, {"schedule", a.schedule}};
    j["partition"] = to_json(p);
    j["audit"] = to_json(audit);
    write_json(a.c.output, j);
    return 0;
}

// ---------------------------------------------------------------- decompose / audit

struct DecomposeArgs {
    Common c;
    std::size_t dim = 0;
    std::string epsilon = "1/10";
    int E = 4;
    std::size_t base_case_n = 8;
    std::string M_prune = "2";
    std::string S_prune = "1";
    std::string A_exponent;
    int degcap_surface = 0;
    int degcap_hyper = 2;
    int surface_search_degree = 2;
    int candidates = 2;
    std::string audit_output;
    bool stages = false;
};

Json config_json(const DecompConfig& cfg, std::size_t dim)
{
    Json j;
    j["dim"] = dim;
    j["epsilon"] = to_json(cfg.epsilon);
    j["E"] = cfg.E;
    j["base_case_n"] = cfg.base_case_n;
    j["M_prune_factor"] = to_json(cfg.M_prune_factor);
    j["S_prune_C2"] = to_json(cfg.S_prune_C2);
    j["A_exponent"] = cfg.A_exponent ? to_json(*cfg.A_exponent) : Json();
    j["degcap_surface"] = cfg.degcap_surface ? Json(*cfg.degcap_surface) : Json();
    j["degcap_hyper"] = cfg.degcap_hyper;
    j["surface_search_degree"] = cfg.surface_search_degree;
    j["partition_candidates"] = cfg.partition_candidates;
    j["seed"] = cfg.seed;
    return j;
}

int cmd_decompose(const DecomposeArgs& a)
{
    const Arrangement arr = load(a.c.input);
    DecompConfig cfg;
    cfg.epsilon = rational_flag("epsilon", a.epsilon);
    cfg.E = a.E;
    cfg.base_case_n = a.base_case_n;
    cfg.M_prune_factor = rational_flag("M-prune", a.M_prune);
    cfg.S_prune_C2 = rational_flag("S-prune", a.S_prune);
    if (!a.A_exponent.empty()) cfg.A_exponent = rational_flag("A-exponent", a.A_exponent);
    if (a.degcap_surface > 0) cfg.degcap_surface = a.degcap_surface;
    cfg.degcap_hyper = a.degcap_hyper;
    cfg.surface_search_degree = a.surface_search_degree;
    cfg.partition_candidates = a.candidates;
    cfg.seed = a.c.seed;
    cfg.threads = resolve_threads(a.c.threads);
    const std::size_t dim = a.dim == 0 ? arr.dim : a.dim;
    if (dim != 3 && dim != 4) throw ParseError("--dim must be 3 or 4");

    const Decomposition dec = dim == 3 ? decompose_r3(arr.curves, cfg) : decompose_r4(arr.curves, cfg);
    const AuditReport audit = audit_decomposition(arr.curves, dec, cfg.epsilon, cfg.threads);
    Json j = to_json(dec);
    j["config"] = config_json(cfg, dim);
    j["config"]["input"] = a.c.input;
    write_json(a.c.output, j);
    if (!a.audit_output.empty()) write_json(a.audit_output, to_json(audit));
    if (a.stages) std::cerr << stage_table(dec);
    if (!audit.sound()) throw AuditFailure("decomposition failed its soundness audit");
    return 0;
}

struct AuditArgs {
    Common c;
    std::string decomposition;
    std::string epsilon;
};

int cmd_audit(const AuditArgs& a)
{
    const Arrangement arr = load(a.c.input);
    const Decomposition dec = decomposition_from_json(read_json(a.decomposition));
    const Rational eps = a.epsilon.empty() ? dec.epsilon : rational_flag("epsilon", a.epsilon);
    const AuditReport audit = audit_decomposition(arr.curves, dec, eps, resolve_threads(a.c.threads));
    Json j = to_json(audit);
    j["config"] = {{"command", "audit"}, {"input", a.c.input}, {"decomposition", a.decomposition}, {"epsilon", to_json(eps)}};
    write_json(a.c.output, j);
    if (!audit.sound()) throw AuditFailure("decomposition is not sound");
    return 0;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
    Common c;
    std::size_t A = 2;
    int degcap = 1;
    int kmax = 0;
};

int cmd_cluster(const ClusterArgs& a)
{
    const Arrangement arr = load(a.c.input);
    const bool surfaces = !arr.surfaces.empty();
    Json j;
    j["config"] = {{"command", "cluster"}, {"input", a.c.input}, {"A", a.A}, {"degcap", a.degcap}, {"kmax", a.kmax}};
    j["clusters"] = to_json(surfaces ? cluster_hypersurfaces(arr.surfaces, a.A, a.degcap) : cluster_hypersurfaces(arr.curves, a.A, a.degcap));
    if (a.kmax > 0) {
        const unsigned threads = resolve_threads(a.c.threads);
        auto v = surfaces ? min_vanishing_polynomial(arr.surfaces, a.kmax, threads) : min_vanishing_polynomial(arr.curves, a.kmax, threads);
        j["min_vanishing_polynomial"] = v ? to_json(*v) : Json();
    }
    write_json(a.c.output, j);
    return 0;
}

// ---------------------------------------------------------------- complexlab

struct ComplexArgs {
    Common c;
    std::string mode = "count";
    std::string coeffs;
    std::string radius;
    std::string h;
    int E = 5;
    std::size_t n = 1000;
    std::size_t d = 1;
    std::size_t trials = 12;
    long bound = 1000;
    bool trial_log = false;
};

// "re[:im]" items, constant term first.
ComplexPoly parse_coefficients(const std::string& text)
{
    std::vector<Complex> c;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.empty() || parts.size() > 2) throw ParseError("coefficient '" + item + "' must be re or re:im");
        c.push_back({parse_rational(parts[0]), parts.size() == 2 ? parse_rational(parts[1]) : Rational(0)});
    }
    if (c.empty()) throw ParseError("--coeffs is empty");
    return ComplexPoly::univariate(c);
}

int cmd_complexlab(const ComplexArgs& a)
{
    if (a.mode == "count") {
        const ComplexPoly p = parse_coefficients(a.coeffs);
        std::optional<Rational> R, h;
        if (!a.radius.empty()) R = rational_flag("radius", a.radius);
        if (!a.h.empty()) h = rational_flag("h", a.h);
        Json j = to_json(complement_components_1d(p, R, h));
        j["config"] = {{"command", "complexlab"}, {"mode", "count"}, {"poly", to_json(p)}};
        write_json(a.c.output, j);
        return 0;
    }
    if (a.mode != "stress") throw ParseError("--mode must be count or stress");
    PointSet X;
    if (!a.c.input.empty()) {
        X = point_set_from_json(read_json(a.c.input));
    } else {
        Rng rng(a.c.seed);
        X.dim = 2 * a.d;
        for (std::size_t i = 0; i < a.n; ++i) {
            RatVec x;
            for (std::size_t k = 0; k < X.dim; ++k) x.push_back(ratio(rng.uniform(-a.bound, a.bound), 100));
            X.points.push_back(std::move(x));
        }
    }
    const StressReport r = conjecture_stress(X.points, a.E, a.trials, a.c.seed);
    Json j = to_json(r, a.trial_log);
    j["config"] = {{"command", "complexlab"}, {"mode", "stress"}, {"input", a.c.input}, {"E", a.E},
                   {"trials", a.trials}, {"seed", a.c.seed}, {"n", X.points.size()}, {"d", X.dim / 2}};
    write_json(a.c.output, j);
    if (!r.lemma_holds) throw AuditFailure("some trial left every component below ceil(n / 2E)");
    return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    Common c;
    std::string kind = "grid";
    std::string sizes = "3,4,5,6,7,8";
    std::size_t dim = 4;
    bool residual = true;
    bool timing = true;
};

double loglog_slope(const std::vector<std::pair<double, double>>& xy)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& [x, y] : xy) {
        if (x <= 0 || y <= 0) continue;
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return std::nan("");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

int cmd_bench(const BenchArgs& a)
{
    std::ostringstream csv;
    csv << "size,n,p2" << (a.residual ? ",residual" : "") << (a.timing ? ",seconds" : "") << '\n';
    std::vector<std::pair<double, double>> xy;
    const unsigned threads = resolve_threads(a.c.threads);
    for (const auto& s : split(a.sizes, ',')) {
        GenArgs g;
        g.c.seed = a.c.seed;
        g.kind = a.kind;
        g.dim = a.dim;
        try {
            g.n = std::stoul(s);
        } catch (const std::exception&) {
            throw ParseError("--sizes: '" + s + "' is not a size");
        }
        const Arrangement arr = generate(g);
        const auto start = std::chrono::steady_clock::now();
        const IncidenceReport r = two_rich_points(arr.curves, threads);
        csv << s << ',' << arr.curves.size() << ',' << r.p2();
        if (a.residual) {
            DecompConfig cfg;
            cfg.seed = a.c.seed;
            cfg.threads = threads;
            const Decomposition dec = arr.dim == 4 ? decompose_r4(arr.curves, cfg) : decompose_r3(arr.curves, cfg);
            csv << ',' << dec.residual_rich_points.size();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (a.timing) csv << ',' << secs;
        csv << '\n';
        xy.emplace_back(static_cast<double>(arr.curves.size()), static_cast<double>(r.p2()));
    }
    const double slope = loglog_slope(xy);
    std::ostringstream line;
    line.precision(6);
    line << "# loglog_slope_p2_vs_n," << (std::isnan(slope) ? std::string("nan") : (std::ostringstream() << slope).str()) << '\n';
    csv << line.str();
    write_text(a.c.output, csv.str());
    std::cerr << line.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact incidence experiments: generate arrangements, count rich points, partition, decompose, audit."};
    app.require_subcommand(1);

    auto add_common = [](CLI::App* sub, Common& c, bool needs_input) {
        if (needs_input) sub->add_option("input", c.input, "Input file")->required();
        sub->add_option("-o,--output", c.output, "Output file (default: stdout)");
        sub->add_option("--seed", c.seed, "Random seed");
        sub->add_option("--threads", c.threads, "Worker cap (0: INCIDENCE_LAB_THREADS or all cores)");
    };

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate an arrangement or point set");
    add_common(g, gen.c, false);
    g->add_option("--kind", gen.kind,
                  "random-lines, regulus, grid, random-conics, random-flats, lines-in-hyperplane, flats-in-hyperplane, "
                  "lines-in-flat, random-points")
        ->required();
    g->add_option("--n", gen.n, "Object count (per ruling for regulus, k for grid)");
    g->add_option("--dim", gen.dim, "Ambient dimension");
    g->add_option("--bound", gen.bound, "Integer coordinate bound");

    CountArgs count;
    auto* c = app.add_subcommand("count", "Exact two-rich points of an arrangement");
    add_common(c, count.c, true);
    c->add_flag("--oracle", count.oracle, "Also run the brute-force counter and diff");
    c->add_option("--format", count.c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    PartitionArgs part;
    auto* p = app.add_subcommand("partition", "Partitioning polynomial for a point set or arrangement");
    add_common(p, part.c, true);
    p->add_option("--E", part.E, "Degree budget");
    p->add_option("--delta", part.delta, "Imbalance tolerance (rational)");
    p->add_option("--dprime", part.dprime, "Coordinates used for points (default: all)");
    p->add_option("--candidates", part.candidates, "Balanced fits compared per step");
    p->add_option("--schedule", part.schedule, "linear or greedy");
    p->add_option("--format", part.c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "Structure decomposition with an audit");
    add_common(d, dec.c, true);
    d->add_option("--dim", dec.dim, "3 or 4 (default: the arrangement's)");
    d->add_option("--epsilon", dec.epsilon, "0 < epsilon < 1/3 (rational)");
    d->add_option("--E", dec.E, "Linear factors per partition step");
    d->add_option("--base-case", dec.base_case_n, "Largest n solved without recursion");
    d->add_option("--M-prune", dec.M_prune, "Hypersurface pruning factor (rational)");
    d->add_option("--S-prune", dec.S_prune, "Surface pruning factor (rational)");
    d->add_option("--A-exponent", dec.A_exponent, "Surface clustering exponent (rational)");
    d->add_option("--degcap-surface", dec.degcap_surface, "Degree split of S4 (default 100 D^2)");
    d->add_option("--degcap-hyper", dec.degcap_hyper, "Largest hypersurface degree searched");
    d->add_option("--surface-degree", dec.surface_search_degree, "Largest surface degree searched in a 3-space");
    d->add_option("--candidates", dec.candidates, "Balanced fits compared per partition step");
    d->add_option("--audit-output", dec.audit_output, "Write the audit report here");
    d->add_flag("--stages", dec.stages, "Print the stage table to stderr");

    AuditArgs aud;
    auto* a = app.add_subcommand("audit", "Re-audit a decomposition against its arrangement");
    add_common(a, aud.c, true);
    a->add_option("--decomposition", aud.decomposition, "Decomposition file")->required();
    a->add_option("--epsilon", aud.epsilon, "Override the stored epsilon (rational)");

    ClusterArgs clu;
    auto* cl = app.add_subcommand("cluster", "Greedy hypersurface clustering");
    add_common(cl, clu.c, true);
    cl->add_option("--A", clu.A, "Members needed to accept a cluster");
    cl->add_option("--degcap", clu.degcap, "Largest cluster degree");
    cl->add_option("--kmax", clu.kmax, "Also report the lowest-degree vanishing polynomial up to this degree");

    ComplexArgs cx;
    auto* x = app.add_subcommand("complexlab", "Complement components of Re P and load stress tests");
    add_common(x, cx.c, false);
    x->add_option("input", cx.c.input, "Point file for stress mode");
    x->add_option("--mode", cx.mode, "count or stress");
    x->add_option("--coeffs", cx.coeffs, "Count mode: re[:im] coefficients from the constant term up");
    x->add_option("--radius", cx.radius, "Count mode: disk radius (rational)");
    x->add_option("--step", cx.h, "Count mode: fixed grid step h (rational)");
    x->add_option("--E", cx.E, "Stress mode: degree");
    x->add_option("--n", cx.n, "Stress mode: random points when no input is given");
    x->add_option("--d", cx.d, "Stress mode: complex dimension of random points");
    x->add_option("--bound", cx.bound, "Stress mode: random coordinates are k/100 with |k| <= bound");
    x->add_option("--trials", cx.trials, "Stress mode: trial polynomials");
    x->add_flag("--trial-log", cx.trial_log, "Stress mode: include every trial");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Scaling table of |P2| and residual against n");
    add_common(b, bench.c, false);
    b->add_option("--kind", bench.kind, "Generator (as in gen)");
    b->add_option("--sizes", bench.sizes, "Comma-separated generator sizes");
    b->add_option("--dim", bench.dim, "Ambient dimension for random generators");
    b->add_flag("!--no-residual", bench.residual, "Skip the decomposition residual column");
    b->add_flag("!--no-time", bench.timing, "Omit the timing column (byte-reproducible output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*c) return cmd_count(count);
        if (*p) return cmd_partition(part);
        if (*d) return cmd_decompose(dec);
        if (*a) return cmd_audit(aud);
        if (*cl) return cmd_cluster(clu);
        if (*x) return cmd_complexlab(cx);
        if (*b) return cmd_bench(bench);
    } catch (const AuditFailure& e) {
        std::cerr << "audit failure: " << e.what() << '\n';
        return kAuditFailure;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
