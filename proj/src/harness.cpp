#include "kiteflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "kiteflow/error.hpp"
#include "kiteflow/euclid.hpp"
#include "kiteflow/network.hpp"

namespace kiteflow
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx to_c(const Point& p) { return {p.x(), p.y()}; }
Point to_p(cplx z) { return {z.real(), z.imag()}; }

std::vector<double> parse_numbers(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, what + ": cannot read number '" + item + "'");
        }
    }
    return out;
}

double segment_distance(const Point& z, const Point& a, const Point& b)
{
    const Point ab = b - a;
    const double len2 = ab.squaredNorm();
    const double s = len2 > 0 ? std::clamp((z - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (z - (a + s * ab)).norm();
}

double triangle_distance(const Triangle& t, const Point& z)
{
    auto cr = [](const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); };
    const double orient = cr(t[1] - t[0], t[2] - t[0]);
    bool inside = true;
    for (int k = 0; k < 3; ++k)
        if (cr(t[(k + 1) % 3] - t[k], z - t[k]) * orient < 0)
            inside = false;
    if (inside)
        return 0.0;
    double d = kInf;
    for (int k = 0; k < 3; ++k)
        d = std::min(d, segment_distance(z, t[k], t[(k + 1) % 3]));
    return d;
}

std::vector<Point> boundary_samples(const Domain& d, int count)
{
    std::vector<Point> out;
    const Point s = to_p(d.shift);
    if (d.kind == DomainKind::Disc) {
        for (int k = 0; k < count; ++k) {
            const double t = 2 * std::numbers::pi * k / count;
            out.push_back(s + Point(std::cos(t), std::sin(t)));
        }
    } else {
        const int per = std::max(1, count / 4);
        const Point corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        for (int side = 0; side < 4; ++side)
            for (int k = 0; k < per; ++k)
                out.push_back(s + corners[side] + (corners[(side + 1) % 4] - corners[side]) * k / per);
    }
    return out;
}

/// Lattice cells of mesh h inside the domain, with diagonal pinches removed
/// and only the largest edge-connected piece kept.
std::vector<Eigen::Vector2i> domain_cells(const Domain& d, int n)
{
    const double h = 1.0 / n;
    auto corner = [&](int i, int j) -> Point { return to_p(d.shift) + Point(i * h, j * h); };
    std::set<std::pair<int, int>> cells;
    const int lo = d.kind == DomainKind::Disc ? -n : 0;
    const int hi = n;
    for (int i = lo; i < hi; ++i)
        for (int j = lo; j < hi; ++j) {
            bool inside = true;
            for (int di = 0; di <= 1; ++di)
                for (int dj = 0; dj <= 1; ++dj)
                    inside = inside && d.depth(corner(i + di, j + dj)) >= -1e-12;
            if (inside)
                cells.insert({i, j});
        }
    auto depth_of = [&](std::pair<int, int> c) {
        double m = kInf;
        for (int di = 0; di <= 1; ++di)
            for (int dj = 0; dj <= 1; ++dj)
                m = std::min(m, d.depth(corner(c.first + di, c.second + dj)));
        return m;
    };
    for (bool changed = true; changed;) {
        changed = false;
        std::set<std::pair<int, int>> points;
        for (auto [i, j] : cells)
            for (int di = 0; di <= 1; ++di)
                for (int dj = 0; dj <= 1; ++dj)
                    points.insert({i + di, j + dj});
        for (auto [x, y] : points) {
            const bool a = cells.count({x - 1, y - 1}), b = cells.count({x, y - 1});
            const bool c = cells.count({x - 1, y}), e = cells.count({x, y});
            std::pair<int, int> p, q;
            if (a && e && !b && !c) {
                p = {x - 1, y - 1};
                q = {x, y};
            } else if (b && c && !a && !e) {
                p = {x, y - 1};
                q = {x - 1, y};
            } else {
                continue;
            }
            cells.erase(depth_of(p) < depth_of(q) ? p : q);
            changed = true;
            break;
        }
    }
    // largest edge-connected component
    std::map<std::pair<int, int>, int> comp;
    std::vector<int> sizes;
    for (auto c : cells) {
        if (comp.count(c))
            continue;
        const int id = static_cast<int>(sizes.size());
        sizes.push_back(0);
        std::vector<std::pair<int, int>> stack{c};
        comp[c] = id;
        while (!stack.empty()) {
            auto [i, j] = stack.back();
            stack.pop_back();
            ++sizes[id];
            for (auto nb : {std::pair{i + 1, j}, std::pair{i - 1, j}, std::pair{i, j + 1}, std::pair{i, j - 1}})
                if (cells.count(nb) && !comp.count(nb)) {
                    comp[nb] = id;
                    stack.push_back(nb);
                }
        }
    }
    if (sizes.empty())
        throw Error(ErrorKind::InvalidArgument, "convergence: level " + std::to_string(n) + " has no cells inside the domain");
    const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<Eigen::Vector2i> out;
    for (auto c : cells)
        if (comp[c] == keep)
            out.emplace_back(c.first, c.second);
    return out;
}

double variance(const Eigen::VectorXd& x)
{
    if (x.size() == 0)
        return 0.0;
    const double mean = x.mean();
    return (x.array() - mean).square().mean();
}

}  // namespace

bool Domain::contains(const Point& z) const { return depth(z) > 0.0; }

double Domain::depth(const Point& z) const
{
    const Point p = z - to_p(shift);
    if (kind == DomainKind::Disc)
        return 1.0 - p.norm();
    return std::min({p.x(), 1.0 - p.x(), p.y(), 1.0 - p.y()});
}

Point Domain::center() const
{
    return to_p(shift) + (kind == DomainKind::Disc ? Point(0, 0) : Point(0.5, 0.5));
}

cplx ReferenceMap::operator()(cplx z) const
{
    switch (kind) {
    case MapKind::Identity: return z;
    case MapKind::Similarity: return a * z + b;
    case MapKind::Moebius: return (z - a) / (1.0 - std::conj(a) * z);
    case MapKind::Square: return z * z;
    }
    return z;
}

cplx ReferenceMap::derivative(cplx z) const
{
    switch (kind) {
    case MapKind::Identity: return 1.0;
    case MapKind::Similarity: return a;
    case MapKind::Moebius: {
        const cplx den = 1.0 - std::conj(a) * z;
        return (1.0 - std::norm(a)) / (den * den);
    }
    case MapKind::Square: return 2.0 * z;
    }
    return 1.0;
}

std::string ReferenceMap::name() const
{
    std::ostringstream ss;
    ss.precision(17);
    switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::Similarity:
        ss << "similarity:" << a.real() << "," << a.imag() << "," << b.real() << "," << b.imag();
        return ss.str();
    case MapKind::Moebius: ss << "moebius:" << a.real() << "," << a.imag(); return ss.str();
    case MapKind::Square: return "square";
    }
    return "identity";
}

ReferenceMap parse_reference_map(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    ReferenceMap m;
    if (head == "identity" && args.empty()) {
        m.kind = MapKind::Identity;
    } else if (head == "square" && args.empty()) {
        m.kind = MapKind::Square;
    } else if (head == "similarity") {
        const auto v = parse_numbers(args, "similarity");
        if (v.size() != 4)
            throw Error(ErrorKind::InvalidArgument, "similarity expects ar,ai,br,bi");
        m.kind = MapKind::Similarity;
        m.a = {v[0], v[1]};
        m.b = {v[2], v[3]};
        if (m.a == 0.0)
            throw Error(ErrorKind::InvalidArgument, "similarity: a must be nonzero");
    } else if (head == "moebius") {
        const auto v = parse_numbers(args, "moebius");
        if (v.empty() || v.size() > 2)
            throw Error(ErrorKind::InvalidArgument, "moebius expects a or ar,ai");
        m.kind = MapKind::Moebius;
        m.a = {v[0], v.size() == 2 ? v[1] : 0.0};
        if (std::abs(m.a) >= 1.0)
            throw Error(ErrorKind::InvalidArgument, "moebius: |a| must be below 1");
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown reference map '" + text + "'");
    }
    return m;
}

Domain parse_domain(const std::string& kind, cplx shift)
{
    Domain d;
    d.shift = shift;
    if (kind == "disc")
        d.kind = DomainKind::Disc;
    else if (kind == "square")
        d.kind = DomainKind::Square;
    else
        throw Error(ErrorKind::InvalidArgument, "unknown domain '" + kind + "' (square or disc)");
    return d;
}

void validate(const ConvergenceSpec& spec)
{
    if (spec.levels.empty())
        throw Error(ErrorKind::InvalidArgument, "convergence: no levels");
    for (std::size_t k = 0; k < spec.levels.size(); ++k) {
        if (spec.levels[k] < 2)
            throw Error(ErrorKind::InvalidArgument, "convergence: levels must be at least 2");
        if (k && spec.levels[k] <= spec.levels[k - 1])
            throw Error(ErrorKind::InvalidArgument, "convergence: levels must be strictly increasing");
    }
    if (!(spec.margin > 0.0 && spec.margin < 0.5))
        throw Error(ErrorKind::InvalidArgument, "convergence: margin must lie in (0, 0.5)");
    if (spec.domain.kind == DomainKind::Disc)
        for (int n : spec.levels)
            if (std::sqrt(2.0) / n >= spec.margin)
                throw Error(ErrorKind::InvalidArgument, "convergence: level " + std::to_string(n) +
                                                            " is too coarse to cover the compact set with margin " +
                                                            std::to_string(spec.margin));
    if (!(spec.q_max >= 1.0))
        throw Error(ErrorKind::InvalidArgument, "convergence: q_max must be at least 1");
    const auto& m = spec.map;
    if (m.kind == MapKind::Moebius && spec.domain.kind == DomainKind::Disc && spec.domain.shift != 0.0)
        throw Error(ErrorKind::InvalidArgument, "convergence: moebius maps act on the unit disc about 0");
    if (m.kind == MapKind::Moebius) {
        // pole at 1/conj(a) must stay away from the domain
        if (std::abs(m.a) > 0 && spec.domain.depth(to_p(1.0 / std::conj(m.a))) >= 0)
            throw Error(ErrorKind::InvalidArgument, "convergence: moebius pole inside the domain");
    }
    if (m.kind == MapKind::Square && spec.domain.depth(Point(0, 0)) >= -1e-12)
        throw Error(ErrorKind::InvalidArgument, "convergence: square map needs a domain avoiding 0 (use a shift)");
}

std::vector<Point> compact_samples(const Domain& d, double margin)
{
    std::vector<Point> out;
    const Point s = to_p(d.shift);
    if (d.kind == DomainKind::Disc) {
        const double R = 1.0 - margin;
        out.push_back(s);
        for (int k = 1; k <= 10; ++k)
            for (int a = 0; a < 32; ++a) {
                const double t = 2 * std::numbers::pi * a / 32;
                out.push_back(s + R * k / 10.0 * Point(std::cos(t), std::sin(t)));
            }
    } else {
        for (int j = 0; j <= 20; ++j)
            for (int i = 0; i <= 20; ++i)
                out.push_back(s + Point(margin + (1 - 2 * margin) * i / 20.0, margin + (1 - 2 * margin) * j / 20.0));
    }
    return out;
}

LevelArtifacts build_level(const ConvergenceSpec& spec, int n, LevelReport* report)
{
    const double h = 1.0 / n;
    LevelArtifacts a;
    a.complex = grid_complex(domain_cells(spec.domain, n));
    a.g = derive_white_graph(a.complex.graph);
    a.alpha.alpha = Eigen::VectorXd::Constant(a.complex.graph.num_quads(), std::numbers::pi / 2);
    const WhiteGraph& g = a.g;
    if (g.interior_vertices.empty())
        throw Error(ErrorKind::InvalidArgument, "convergence: level " + std::to_string(n) + " has no interior vertex");

    auto phys = [&](int v) -> Point {
        return to_p(spec.domain.shift) + h * a.complex.lattice[g.white_ids[v]].cast<double>();
    };
    int root = 0;
    const Point mid = spec.domain.center();
    for (int v = 1; v < g.num_vertices; ++v)
        if ((phys(v) - mid).norm() < (phys(root) - mid).norm() - 1e-12)
            root = v;
    const Point first = phys(g.incident[root][0].neighbor) - phys(root);
    const double dir = std::atan2(first.y(), first.x());

    a.r_source = Eigen::VectorXd::Constant(g.num_vertices, h);
    a.source = layout(g, a.alpha, a.r_source, Anchor{root, phys(root), dir});

    Eigen::VectorXd bnd(static_cast<Eigen::Index>(g.boundary_vertices.size()));
    for (std::size_t k = 0; k < g.boundary_vertices.size(); ++k)
        bnd[static_cast<Eigen::Index>(k)] = std::abs(spec.map.derivative(to_c(phys(g.boundary_vertices[k])))) * h;
    DirichletSolution sol;
    try {
        sol = solve_dirichlet(g, a.alpha, bnd);
    } catch (const Error& e) {
        throw Error(e.kind(), "level " + std::to_string(n) + ": " + e.what());
    }
    a.r_target = sol.r;
    const cplx d0 = spec.map.derivative(to_c(phys(root)));
    a.target = layout(g, a.alpha, a.r_target, Anchor{root, to_p(spec.map(to_c(phys(root)))), dir + std::arg(d0)});

    const auto ks = kites(a.source, g), kt = kites(a.target, g);
    try {
        a.map = build_map(g, a.alpha, ks, a.alpha, kt);
        a.inverse = build_map(g, a.alpha, kt, a.alpha, ks);
    } catch (const Error& e) {
        throw Error(e.kind(), "level " + std::to_string(n) + ": " + e.what());
    }

    if (report) {
        LevelReport& rep = *report;
        rep = LevelReport{};
        rep.n = n;
        rep.h = h;
        rep.num_white = g.num_vertices;
        rep.num_quads = g.num_edges();
        rep.source_max_diameter = 2 * a.r_source.maxCoeff();
        rep.delta = 2 * rep.source_max_diameter;
        rep.target_max_diameter = 2 * a.r_target.maxCoeff();
        const auto qs = q_bound(g, a.alpha, a.r_source);
        const auto qt = q_bound(g, a.alpha, a.r_target);
        rep.q = std::max(qs.q, qt.q);
        rep.kites_convex = qs.nonconvex_edges.empty() && qt.nonconvex_edges.empty();
        rep.q_bounded = rep.q <= spec.q_max;
        rep.embedded = true;
        const auto dil = dilatation(a.map);
        rep.max_dilatation = dil.max;
        rep.max_dilatation_compact = 1.0;
        for (int t = 0; t < a.map.num_triangles(); ++t) {
            const auto& T = a.map.source_triangle(t);
            if (spec.domain.depth((T[0] + T[1] + T[2]) / 3) >= spec.margin)
                rep.max_dilatation_compact = std::max(rep.max_dilatation_compact, dil.K[t]);
        }
        rep.sup_error = sup_error(
            a.map, [&](const Point& z) { return to_p(spec.map(to_c(z))); }, compact_samples(spec.domain, spec.margin));
        rep.preimage_margin = properness_probe(spec, a, {spec.margin})[0];
        for (const auto& z : boundary_samples(spec.domain, 720)) {
            double best = kInf;
            for (int t = 0; t < a.map.num_triangles() && best > 0; ++t)
                best = std::min(best, triangle_distance(a.map.source_triangle(t), z));
            rep.uncovered_distance = std::max(rep.uncovered_distance, best);
        }
        const Eigen::VectorXd u = ratio_function(a.r_source, a.r_target);
        rep.u_min = u.minCoeff();
        rep.u_max = u.maxCoeff();
        rep.solver_iterations = sol.report.iterations;
        rep.solver_residual = sol.report.residual;
        rep.radii_below_half_delta = a.r_source.maxCoeff() < rep.delta / 2;
        rep.kites_within_delta = rep.uncovered_distance < rep.delta;
    }
    return a;
}

std::vector<double> properness_probe(const ConvergenceSpec& spec, const LevelArtifacts& level,
                                     const std::vector<double>& margins)
{
    std::vector<double> out;
    for (double m : margins) {
        double worst = kInf;
        for (const auto& z : compact_samples(spec.domain, m)) {
            const Point w = to_p(spec.map(to_c(z)));
            if (level.inverse.locate(w) < 0)
                continue;
            worst = std::min(worst, spec.domain.depth(level.inverse.eval(w)));
        }
        out.push_back(worst);
    }
    return out;
}

ConvergenceReport run_convergence(const ConvergenceSpec& spec)
{
    validate(spec);
    ConvergenceReport rep;
    rep.spec = spec;
    for (int n : spec.levels) {
        LevelReport row;
        build_level(spec, n, &row);
        rep.levels.push_back(row);
    }
    return rep;
}

void validate(const RigiditySpec& spec)
{
    if (spec.sizes.empty())
        throw Error(ErrorKind::InvalidArgument, "rigidity: no sizes");
    for (int s : spec.sizes)
        if (s < 2)
            throw Error(ErrorKind::InvalidArgument, "rigidity: sizes must be at least 2");
    if (!(spec.amplitude >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "rigidity: amplitude must be nonnegative");
    if (spec.tgrid.empty())
        throw Error(ErrorKind::InvalidArgument, "rigidity: empty t grid");
    for (double t : spec.tgrid)
        if (!(t >= 0.0 && t <= 1.0))
            throw Error(ErrorKind::InvalidArgument, "rigidity: t grid must lie in [0, 1]");
    if (!(spec.dt > 0.0))
        throw Error(ErrorKind::InvalidArgument, "rigidity: dt must be positive");
}

RigidityReport run_rigidity(const RigiditySpec& spec)
{
    validate(spec);
    RigidityReport rep;
    rep.spec = spec;
    for (int N : spec.sizes) {
        auto [d, alpha] = generate_square_grid(N, N, std::numbers::pi / 2);
        const WhiteGraph g = derive_white_graph(d);
        const auto nb = static_cast<Eigen::Index>(g.boundary_vertices.size());
        const auto ni = static_cast<Eigen::Index>(g.interior_vertices.size());

        std::mt19937_64 rng(spec.seed + static_cast<std::uint64_t>(N));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        Eigen::VectorXd lambda_b(nb);
        for (Eigen::Index k = 0; k < nb; ++k)
            lambda_b[k] = spec.amplitude * unif(rng);

        SolveOptions opts;
        opts.tol = 1e-13;
        auto solve_at = [&](double t, const Eigen::VectorXd* guess) {
            SolveOptions o = opts;
            if (guess && ni) {
                Eigen::VectorXd rho(ni);
                for (Eigen::Index k = 0; k < ni; ++k)
                    rho[k] = std::log((*guess)[g.interior_vertices[k]]);
                o.initial_rho = rho;
            }
            return solve_dirichlet(g, alpha, (lambda_b * t).array().exp().matrix(), o).r;
        };

        RigidityLevel lvl;
        lvl.size = N;
        lvl.num_white = g.num_vertices;
        const Eigen::VectorXd r_tilde = solve_at(1.0, nullptr);
        lvl.max_abs_lambda = r_tilde.array().log().abs().maxCoeff();
        double var_sum = 0.0;
        for (double t : spec.tgrid) {
            const Eigen::VectorXd rt = solve_at(t, nullptr);
            const Eigen::VectorXd rp = solve_at(t + spec.dt, &rt);
            const Eigen::VectorXd rm = solve_at(t - spec.dt, &rt);
            const Eigen::VectorXd h = (rp.array().log() - rm.array().log()).matrix() / (2 * spec.dt);
            const Eigen::VectorXd lap = laplacian(conductances_from_pattern(g, alpha, rt), h);
            double worst = 0.0;
            for (int v : g.interior_vertices)
                worst = std::max(worst, std::abs(lap[v]));
            lvl.laplacian_per_t.push_back(worst);
            lvl.max_abs_laplacian = std::max(lvl.max_abs_laplacian, worst);
            lvl.max_abs_h = std::max(lvl.max_abs_h, h.cwiseAbs().maxCoeff());
            var_sum += variance(h);
        }
        lvl.var_h = var_sum / static_cast<double>(spec.tgrid.size());
        lvl.bound_holds = lvl.max_abs_h <= lvl.max_abs_lambda + 1e-6;
        rep.levels.push_back(lvl);
    }
    return rep;
}

TauReport tau_diagnostic(const CirclePattern& p, const WhiteGraph& g, const Point& origin)
{
    if (static_cast<int>(p.center.size()) != g.num_vertices)
        throw Error(ErrorKind::CombinatoricsMismatch, "tau: pattern does not match the graph");
    TauReport rep;
    rep.tau.resize(g.num_vertices);
    for (int v = 0; v < g.num_vertices; ++v) {
        const double gap = (p.center[v] - origin).norm() - p.radius[v];
        rep.tau[v] = gap > 0.0 ? p.radius[v] / gap : kInf;
    }
    rep.max = g.num_vertices ? rep.tau.maxCoeff() : 0.0;
    for (int v : g.boundary_vertices)
        rep.max_outer = std::max(rep.max_outer, rep.tau[v]);
    return rep;
}

json to_json(const ConvergenceReport& r)
{
    json doc;
    doc["domain"] = {{"kind", r.spec.domain.kind == DomainKind::Disc ? "disc" : "square"},
                     {"shift", {r.spec.domain.shift.real(), r.spec.domain.shift.imag()}}};
    doc["map"] = r.spec.map.name();
    doc["levels"] = r.spec.levels;
    doc["margin"] = r.spec.margin;
    doc["q_max"] = r.spec.q_max;
    doc["seed"] = r.spec.seed;
    json rows = json::array();
    for (const auto& l : r.levels) {
        rows.push_back({{"n", l.n},
                        {"h", l.h},
                        {"num_white", l.num_white},
                        {"num_quads", l.num_quads},
                        {"source_max_diameter", l.source_max_diameter},
                        {"delta", l.delta},
                        {"delta_tilde", l.target_max_diameter},
                        {"q", l.q},
                        {"max_dilatation", l.max_dilatation},
                        {"max_dilatation_compact", l.max_dilatation_compact},
                        {"sup_error", l.sup_error},
                        {"preimage_margin", l.preimage_margin},
                        {"uncovered_distance", l.uncovered_distance},
                        {"u_min", l.u_min},
                        {"u_max", l.u_max},
                        {"solver_iterations", l.solver_iterations},
                        {"solver_residual", l.solver_residual},
                        {"checks",
                         {{"radii_below_half_delta", l.radii_below_half_delta},
                          {"kites_within_delta", l.kites_within_delta},
                          {"kites_convex", l.kites_convex},
                          {"q_bounded", l.q_bounded},
                          {"embedded", l.embedded}}}});
    }
    doc["rows"] = rows;
    return doc;
}

json to_json(const RigidityReport& r)
{
    json doc;
    doc["sizes"] = r.spec.sizes;
    doc["amplitude"] = r.spec.amplitude;
    doc["tgrid"] = r.spec.tgrid;
    doc["dt"] = r.spec.dt;
    doc["seed"] = r.spec.seed;
    json rows = json::array();
    for (const auto& l : r.levels)
        rows.push_back({{"size", l.size},
                        {"num_white", l.num_white},
                        {"max_abs_lambda", l.max_abs_lambda},
                        {"max_abs_laplacian", l.max_abs_laplacian},
                        {"laplacian_per_t", l.laplacian_per_t},
                        {"max_abs_h", l.max_abs_h},
                        {"bound_holds", l.bound_holds},
                        {"var_h", l.var_h}});
    doc["rows"] = rows;
    return doc;
}

json to_json(const TauReport& r)
{
    json tau = json::array();
    for (Eigen::Index v = 0; v < r.tau.size(); ++v)
        tau.push_back(std::isinf(r.tau[v]) ? json("inf") : json(r.tau[v]));
    return {{"tau", tau},
            {"max_outer", std::isinf(r.max_outer) ? json("inf") : json(r.max_outer)},
            {"max", std::isinf(r.max) ? json("inf") : json(r.max)}};
}

}  // namespace kiteflow
