// kiteflow: command-line front end.
//
// Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kiteflow/bquad.hpp"
#include "kiteflow/dcmap.hpp"
#include "kiteflow/error.hpp"
#include "kiteflow/euclid.hpp"
#include "kiteflow/harness.hpp"
#include "kiteflow/hyper.hpp"
#include "kiteflow/io.hpp"
#include "kiteflow/layout.hpp"
#include "kiteflow/network.hpp"

namespace fs = std::filesystem;
using namespace kiteflow;

namespace
{

void require_input(const std::string& path)
{
    if (!path.empty() && !fs::is_regular_file(path))
        throw Error(ErrorKind::IOError, "input file not found: " + path);
}

void require_output(const std::string& path)
{
    if (path.empty())
        return;
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty() && !fs::is_directory(parent))
        throw Error(ErrorKind::IOError, "output directory does not exist: " + parent.string());
}

/// Writes to the file, or to stdout when no path is given.
void emit(const std::string& path, const json& doc)
{
    if (path.empty())
        std::cout << dump_json(doc);
    else
        write_json_file(path, doc);
}

std::optional<std::uint64_t> seed_override()
{
    const char* env = std::getenv("KITEFLOW_SEED");
    if (!env || !*env)
        return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string(env).size())
            return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, std::string("KITEFLOW_SEED is not an unsigned integer: ") + env);
}

struct Loaded {
    BQuadGraph d;
    Labelling alpha;
    WhiteGraph g;
};

Loaded load_graph(const std::string& path)
{
    auto [d, alpha] = load_bquad(path);
    WhiteGraph g = derive_white_graph(d);
    return {std::move(d), std::move(alpha), std::move(g)};
}

/// White index of a global vertex id.
int white_index(const Loaded& L, int id)
{
    if (id < 0 || id >= L.d.num_vertices() || !L.d.is_white(id))
        throw Error(ErrorKind::InvalidArgument, "vertex " + std::to_string(id) + " is not a white vertex");
    return L.d.color_index(id);
}

std::vector<int> white_set(const Loaded& L, const std::string& path)
{
    std::vector<int> out;
    for (int id : load_vertex_set(path))
        out.push_back(white_index(L, id));
    return out;
}

Eigen::VectorXd dense_radii(const Loaded& L, const std::string& path)
{
    const auto r = load_radii(path);
    if (static_cast<int>(r.size()) != L.g.num_vertices)
        throw Error(ErrorKind::ParseError, path + ": one radius per white vertex expected");
    Eigen::VectorXd out(L.g.num_vertices);
    for (int v = 0; v < L.g.num_vertices; ++v) {
        if (!r[v])
            throw Error(ErrorKind::MissingRadius, path + ": radius of white vertex " + std::to_string(v) + " is null");
        out[v] = *r[v];
    }
    return out;
}

json points_json(const std::vector<Point>& pts)
{
    json a = json::array();
    for (const auto& p : pts)
        a.push_back(json::array({p.x(), p.y()}));
    return a;
}

std::vector<Point> load_points(const std::string& path)
{
    const json doc = read_json_file(path);
    const json& a = require_field(doc, "points");
    if (!a.is_array())
        throw Error(ErrorKind::ParseError, path + ": 'points' must be an array");
    std::vector<Point> out;
    for (const auto& p : a) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw Error(ErrorKind::ParseError, path + ": points must be [x, y] pairs");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

cplx parse_pair(const std::string& text)
{
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos)
            return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "cannot read point '" + text + "'");
    }
}

int run(int argc, char** argv)
{
    CLI::App app{"Circle patterns, kite layouts and discrete conformal maps"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate combinatorics");
    gen->require_subcommand(1);
    auto* sg = gen->add_subcommand("sg", "Square grid of n x m cells");
    int sg_n = 0, sg_m = 0;
    double sg_alpha = std::numbers::pi / 2;
    bool sg_black = false;
    std::string sg_out, sg_boundary;
    double sg_boundary_value = 1.0;
    sg->add_option("--n", sg_n, "columns")->required()->check(CLI::PositiveNumber);
    sg->add_option("--m", sg_m, "rows")->required()->check(CLI::PositiveNumber);
    sg->add_option("--alpha", sg_alpha, "intersection angle (radians)");
    sg->add_flag("--origin-black", sg_black, "lattice origin is a black vertex");
    sg->add_option("-o,--output", sg_out, "graph file")->required();
    sg->add_option("--boundary", sg_boundary, "also write a boundary radii file");
    sg->add_option("--boundary-value", sg_boundary_value, "radius written on boundary vertices");

    // solve
    auto* solve = app.add_subcommand("solve", "Euclidean Dirichlet problem for radii");
    std::string s_graph, s_bnd, s_out;
    SolveOptions s_opts;
    solve->add_option("-g,--graph", s_graph)->required();
    solve->add_option("-b,--boundary", s_bnd, "radii file; interior entries may be null")->required();
    solve->add_option("-o,--output", s_out);
    solve->add_option("--tol", s_opts.tol);
    solve->add_option("--max-iter", s_opts.max_iter);

    // hsolve
    auto* hsolve = app.add_subcommand("hsolve", "Minimize the hyperbolic functional");
    std::string h_graph, h_bnd, h_out;
    HypSolveOptions h_opts;
    hsolve->add_option("-g,--graph", h_graph)->required();
    hsolve->add_option("-b,--boundary", h_bnd, "{rho, kind, beta} file")->required();
    hsolve->add_option("-o,--output", h_out);
    hsolve->add_option("--tol", h_opts.tol);
    hsolve->add_option("--max-iter", h_opts.max_iter);

    // layout
    auto* lay = app.add_subcommand("layout", "Lay out a circle pattern");
    std::string l_graph, l_radii, l_out, l_svg;
    int l_root = -1;
    std::string l_pos = "0,0";
    double l_dir = 0.0;
    lay->add_option("-g,--graph", l_graph)->required();
    lay->add_option("-r,--radii", l_radii)->required();
    lay->add_option("-o,--output", l_out);
    lay->add_option("--svg", l_svg);
    lay->add_option("--root", l_root, "global id of the anchor white vertex");
    lay->add_option("--position", l_pos, "x,y of the anchor center");
    lay->add_option("--direction", l_dir, "direction of the first edge at the anchor");

    // map
    auto* mp = app.add_subcommand("map", "Discrete conformal map between two patterns");
    std::string m_graph, m_src, m_tgt, m_eval, m_out;
    bool m_dil = false;
    mp->add_option("-g,--graph", m_graph)->required();
    mp->add_option("-s,--source", m_src)->required();
    mp->add_option("-t,--target", m_tgt)->required();
    mp->add_option("--eval", m_eval, "{points: [[x, y], ...]}");
    mp->add_option("-o,--output", m_out);
    mp->add_flag("--dilatation", m_dil);

    // net
    auto* net = app.add_subcommand("net", "Network quantities on the white graph");
    std::string n_graph, n_radii, n_pattern, n_out;
    std::vector<std::string> n_reff, n_vel;
    int n_profile = -1;
    std::vector<double> n_rad;
    net->add_option("-g,--graph", n_graph)->required();
    net->add_option("-r,--radii", n_radii, "radii for the conductances (default 1)");
    net->add_option("-p,--pattern", n_pattern, "pattern file, needed by --profile");
    net->add_option("-o,--output", n_out);
    auto* o_reff = net->add_option("--reff", n_reff, "A.json Z.json")->expected(2);
    auto* o_vel = net->add_option("--vel", n_vel, "V1.json V2.json")->expected(2);
    auto* o_prof = net->add_option("--profile", n_profile, "global id of v0");
    net->add_option("--radii-list", n_rad, "ring radii for --profile")->delimiter(',');
    o_reff->excludes(o_vel)->excludes(o_prof);
    o_vel->excludes(o_prof);

    // converge
    auto* conv = app.add_subcommand("converge", "Convergence experiment");
    std::string c_domain = "disc", c_map = "identity", c_shift = "0,0", c_out, c_svg;
    ConvergenceSpec c_spec;
    conv->add_option("--domain", c_domain)->check(CLI::IsMember({"disc", "square"}));
    conv->add_option("--map", c_map);
    conv->add_option("--shift", c_shift, "x,y translation of the domain");
    conv->add_option("--levels", c_spec.levels)->delimiter(',');
    conv->add_option("--margin", c_spec.margin);
    conv->add_option("--q-max", c_spec.q_max);
    conv->add_option("--seed", c_spec.seed);
    conv->add_option("-o,--output", c_out);
    conv->add_option("--svg-dir", c_svg, "per-level pattern SVGs");

    // rigidity
    auto* rig = app.add_subcommand("rigidity", "Rigidity interpolation experiment");
    RigiditySpec r_spec;
    std::string r_out;
    rig->add_option("--sizes", r_spec.sizes)->delimiter(',');
    rig->add_option("--amp", r_spec.amplitude);
    rig->add_option("--tgrid", r_spec.tgrid)->delimiter(',');
    rig->add_option("--dt", r_spec.dt);
    rig->add_option("--seed", r_spec.seed);
    rig->add_option("-o,--output", r_out);

    // constants
    auto* cst = app.add_subcommand("constants", "Report C0, C2, C6");
    double k_alpha0 = 0, k_N = 0, k_C1 = 0;
    std::string k_out;
    cst->add_option("--alpha0", k_alpha0)->required();
    cst->add_option("--N", k_N)->required();
    cst->add_option("--C1", k_C1)->required();
    cst->add_option("-o,--output", k_out);

    // tau
    auto* tau = app.add_subcommand("tau", "tau(v) = r(v) / d(origin, disc(v))");
    std::string t_graph, t_pattern, t_origin = "0,0", t_out;
    tau->add_option("-g,--graph", t_graph)->required();
    tau->add_option("-p,--pattern", t_pattern)->required();
    tau->add_option("--origin", t_origin);
    tau->add_option("-o,--output", t_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto seed = seed_override();

    if (*sg) {
        require_output(sg_out);
        require_output(sg_boundary);
        auto [d, alpha] = generate_square_grid(sg_n, sg_m, sg_alpha, !sg_black);
        save_bquad(sg_out, d, alpha);
        if (!sg_boundary.empty()) {
            const WhiteGraph g = derive_white_graph(d);
            json r = json::array();
            for (int v = 0; v < g.num_vertices; ++v)
                r.push_back(g.is_boundary(v) ? json(sg_boundary_value) : json(nullptr));
            write_json_file(sg_boundary, {{"r", r}});
        }
        std::cout << "wrote " << sg_out << ": " << d.num_vertices() << " vertices, " << d.num_quads() << " quads\n";
    } else if (*solve) {
        require_input(s_graph);
        require_input(s_bnd);
        require_output(s_out);
        const auto L = load_graph(s_graph);
        const auto given = load_radii(s_bnd);
        if (static_cast<int>(given.size()) != L.g.num_vertices)
            throw Error(ErrorKind::ParseError, s_bnd + ": one entry per white vertex expected");
        Eigen::VectorXd b(static_cast<Eigen::Index>(L.g.boundary_vertices.size()));
        for (std::size_t k = 0; k < L.g.boundary_vertices.size(); ++k) {
            const auto& val = given[L.g.boundary_vertices[k]];
            if (!val)
                throw Error(ErrorKind::MissingRadius, "boundary white vertex " +
                                                          std::to_string(L.g.white_ids[L.g.boundary_vertices[k]]) +
                                                          " has no radius");
            b[static_cast<Eigen::Index>(k)] = *val;
        }
        const auto sol = solve_dirichlet(L.g, L.alpha, b, s_opts);
        const json doc = {{"r", std::vector<double>(sol.r.data(), sol.r.data() + sol.r.size())}};
        emit(s_out, doc);
        if (!s_out.empty())
            std::cout << "solved in " << sol.report.iterations << " iterations, residual " << sol.report.residual << "\n";
    } else if (*hsolve) {
        require_input(h_graph);
        require_input(h_bnd);
        require_output(h_out);
        const auto L = load_graph(h_graph);
        const json doc = read_json_file(h_bnd);
        const auto rho = read_number_array(doc, "rho", h_bnd);
        const json& kinds = require_field(doc, "kind");
        const int n = L.g.num_vertices;
        if (static_cast<int>(rho.size()) != n || !kinds.is_array() || static_cast<int>(kinds.size()) != n)
            throw Error(ErrorKind::ParseError, h_bnd + ": rho and kind need one entry per white vertex");
        std::vector<std::optional<double>> beta(n);
        if (doc.contains("beta")) {
            beta = read_number_array(doc, "beta", h_bnd);
            if (static_cast<int>(beta.size()) != n)
                throw Error(ErrorKind::ParseError, h_bnd + ": beta needs one entry per white vertex");
        }
        HypRadiusAssignment a;
        a.value = Eigen::VectorXd::Zero(n);
        a.kind.resize(n);
        bool generalized = false;
        for (int v = 0; v < n; ++v) {
            if (!kinds[v].is_string())
                throw Error(ErrorKind::ParseError, h_bnd + ": kind entries are strings");
            a.kind[v] = hyp_kind_from_string(kinds[v].get<std::string>());
            if (a.kind[v] == HypKind::Beta) {
                if (!beta[v])
                    throw Error(ErrorKind::MissingRadius, h_bnd + ": beta vertex " + std::to_string(v) + " has no beta");
                a.value[v] = *beta[v];
                generalized = true;
            } else if (a.kind[v] == HypKind::Boundary) {
                if (!rho[v])
                    throw Error(ErrorKind::MissingRadius, h_bnd + ": boundary vertex " + std::to_string(v) + " has no rho");
                a.value[v] = *rho[v];
            } else if (rho[v]) {
                a.value[v] = *rho[v];
            }
        }
        HypSolution sol;
        if (generalized) {
            sol = minimize_s_hyp_gen(L.g, L.alpha, a, h_opts);
        } else {
            Eigen::VectorXd b(static_cast<Eigen::Index>(L.g.boundary_vertices.size()));
            for (std::size_t k = 0; k < L.g.boundary_vertices.size(); ++k) {
                const int v = L.g.boundary_vertices[k];
                if (a.kind[v] != HypKind::Boundary)
                    throw Error(ErrorKind::InvalidArgument, h_bnd + ": vertex " + std::to_string(v) +
                                                                " lies on the boundary but is not marked bnd");
                b[static_cast<Eigen::Index>(k)] = a.value[v];
            }
            sol = minimize_s_hyp(L.g, L.alpha, b, h_opts);
        }
        json out_rho = json::array(), out_kind = json::array(), out_beta = json::array();
        for (int v = 0; v < n; ++v) {
            const bool is_beta = sol.rho.kind[v] == HypKind::Beta;
            out_rho.push_back(is_beta ? json(nullptr) : json(sol.rho.value[v]));
            out_kind.push_back(to_string(sol.rho.kind[v]));
            out_beta.push_back(is_beta ? json(sol.rho.value[v]) : json(nullptr));
        }
        emit(h_out, {{"rho", out_rho}, {"kind", out_kind}, {"beta", out_beta}});
        if (!h_out.empty())
            std::cout << "minimized in " << sol.report.iterations << " iterations, gradient "
                      << sol.report.gradient_norm << "\n";
    } else if (*lay) {
        require_input(l_graph);
        require_input(l_radii);
        require_output(l_out);
        require_output(l_svg);
        const auto L = load_graph(l_graph);
        const Eigen::VectorXd r = dense_radii(L, l_radii);
        const cplx pos = parse_pair(l_pos);
        const Anchor anchor{l_root < 0 ? 0 : white_index(L, l_root), Point(pos.real(), pos.imag()), l_dir};
        const auto p = layout(L.g, L.alpha, r, anchor);
        if (!l_out.empty())
            save_pattern(l_out, p);
        if (!l_svg.empty())
            write_text_file(l_svg, to_svg(p, L.g));
        const auto emb = check_embedded(kites(p, L.g), L.g);
        const double closure = closure_residual(p, L.g, L.alpha).max_residual;
        if (l_out.empty() && l_svg.empty()) {
            json doc = {{"center", points_json(p.center)},
                        {"radius", std::vector<double>(p.radius.data(), p.radius.data() + p.radius.size())},
                        {"black", points_json(p.black)}};
            emit("", doc);
        } else {
            std::cout << "closure residual " << closure << ", diameter " << pattern_diameter(p)
                      << (emb.embedded ? ", embedded\n" : ", not embedded\n");
        }
    } else if (*mp) {
        require_input(m_graph);
        require_input(m_src);
        require_input(m_tgt);
        require_input(m_eval);
        require_output(m_out);
        const auto L = load_graph(m_graph);
        const auto src = load_pattern(m_src), tgt = load_pattern(m_tgt);
        if (static_cast<int>(src.center.size()) != L.g.num_vertices ||
            static_cast<int>(tgt.center.size()) != L.g.num_vertices ||
            static_cast<int>(src.black.size()) != L.g.num_black || static_cast<int>(tgt.black.size()) != L.g.num_black)
            throw Error(ErrorKind::CombinatoricsMismatch, "map: patterns do not match the graph");
        const auto m = build_map(L.g, L.alpha, kites(src, L.g), L.alpha, kites(tgt, L.g));
        json doc = json::object();
        if (!m_eval.empty()) {
            std::vector<Point> images;
            for (const auto& z : load_points(m_eval))
                images.push_back(m.eval(z));
            doc["images"] = points_json(images);
        }
        if (m_dil) {
            const auto rep = dilatation(m);
            doc["dilatation"] = {{"K", std::vector<double>(rep.K.data(), rep.K.data() + rep.K.size())},
                                 {"max", rep.max}};
        }
        emit(m_out, doc);
    } else if (*net) {
        require_input(n_graph);
        require_input(n_radii);
        require_input(n_pattern);
        for (const auto& f : n_reff)
            require_input(f);
        for (const auto& f : n_vel)
            require_input(f);
        require_output(n_out);
        const auto L = load_graph(n_graph);
        const Eigen::VectorXd r =
            n_radii.empty() ? Eigen::VectorXd::Ones(L.g.num_vertices) : dense_radii(L, n_radii);
        const auto wg = conductances_from_pattern(L.g, L.alpha, r);
        json doc;
        if (!n_reff.empty()) {
            const double R = effective_resistance(wg, white_set(L, n_reff[0]), white_set(L, n_reff[1]));
            doc["reff"] = std::isinf(R) ? json("inf") : json(R);
        } else if (!n_vel.empty()) {
            const auto res = vel(wg, white_set(L, n_vel[0]), white_set(L, n_vel[1]));
            doc = {{"mod", res.mod},
                   {"vel", res.vel},
                   {"eta", std::vector<double>(res.eta.data(), res.eta.data() + res.eta.size())},
                   {"constraints", res.constraints}};
        } else if (n_profile >= 0) {
            if (n_pattern.empty())
                throw Error(ErrorKind::InvalidArgument, "--profile needs a pattern file (-p)");
            if (n_rad.empty())
                throw Error(ErrorKind::InvalidArgument, "--profile needs --radii-list");
            const auto prof = annuli_resistance_profile(wg, load_pattern(n_pattern), white_index(L, n_profile), n_rad);
            json a = json::array();
            for (double x : prof)
                a.push_back(std::isinf(x) ? json("inf") : json(x));
            doc = {{"radii", n_rad}, {"reff", a}};
        } else {
            const auto rep = conductance_sum_report(wg);
            json mu = json::array();
            for (const auto& e : wg.edges)
                mu.push_back(e.mu);
            doc = {{"mu", mu}, {"max_conductance_sum", rep.max}};
        }
        emit(n_out, doc);
    } else if (*conv) {
        require_output(c_out);
        if (!c_svg.empty() && !fs::is_directory(c_svg))
            throw Error(ErrorKind::IOError, "svg directory does not exist: " + c_svg);
        c_spec.domain = parse_domain(c_domain, parse_pair(c_shift));
        c_spec.map = parse_reference_map(c_map);
        if (seed)
            c_spec.seed = *seed;
        validate(c_spec);
        ConvergenceReport rep;
        rep.spec = c_spec;
        for (int n : c_spec.levels) {
            LevelReport row;
            const auto level = build_level(c_spec, n, &row);
            rep.levels.push_back(row);
            if (!c_svg.empty()) {
                write_text_file((fs::path(c_svg) / ("source_" + std::to_string(n) + ".svg")).string(),
                                to_svg(level.source, level.g));
                write_text_file((fs::path(c_svg) / ("target_" + std::to_string(n) + ".svg")).string(),
                                to_svg(level.target, level.g));
            }
        }
        emit(c_out, to_json(rep));
        if (!c_out.empty())
            for (const auto& l : rep.levels)
                std::cout << "n=" << l.n << " sup error " << l.sup_error << " max K " << l.max_dilatation << "\n";
    } else if (*rig) {
        require_output(r_out);
        if (seed)
            r_spec.seed = *seed;
        const auto rep = run_rigidity(r_spec);
        emit(r_out, to_json(rep));
        if (!r_out.empty())
            for (const auto& l : rep.levels)
                std::cout << "size " << l.size << " max |lap h| " << l.max_abs_laplacian << " var h " << l.var_h << "\n";
    } else if (*cst) {
        require_output(k_out);
        const auto c = network_constants(k_alpha0, k_N, k_C1);
        emit(k_out, {{"alpha0", k_alpha0}, {"N", k_N}, {"C1", k_C1}, {"C0", c.C0}, {"C2", c.C2}, {"C6", c.C6}});
    } else if (*tau) {
        require_input(t_graph);
        require_input(t_pattern);
        require_output(t_out);
        const auto L = load_graph(t_graph);
        const auto p = load_pattern(t_pattern);
        if (static_cast<int>(p.center.size()) != L.g.num_vertices)
            throw Error(ErrorKind::CombinatoricsMismatch, "tau: pattern does not match the graph");
        const cplx o = parse_pair(t_origin);
        emit(t_out, to_json(tau_diagnostic(p, L.g, Point(o.real(), o.imag()))));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
