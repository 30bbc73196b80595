#include "kiteflow/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>

#include "kiteflow/error.hpp"
#include "kiteflow/euclid.hpp"
#include "kiteflow/io.hpp"
#include "kiteflow/kernel.hpp"

namespace kiteflow
{

namespace
{

Point polar(double len, double angle) { return {len * std::cos(angle), len * std::sin(angle)}; }

double half_angle(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& rho, int v, int k)
{
    const auto& inc = g.incident[v][k];
    return f_theta(alpha.alpha[inc.edge], rho[inc.neighbor] - rho[v]);
}

/// Directions of all incident edges at v given the direction of edge k0.
std::vector<double> fan_directions(const WhiteGraph& g, const Labelling& alpha,
                                   const Eigen::VectorXd& rho, int v, int k0, double d0)
{
    const int deg = static_cast<int>(g.incident[v].size());
    std::vector<double> gamma(deg), dir(deg);
    for (int k = 0; k < deg; ++k)
        gamma[k] = half_angle(g, alpha, rho, v, k);
    dir[k0] = d0;
    for (int k = k0 + 1; k < deg; ++k)
        dir[k] = dir[k - 1] + gamma[k - 1] + gamma[k];
    for (int k = k0 - 1; k >= 0; --k)
        dir[k] = dir[k + 1] - gamma[k + 1] - gamma[k];
    return dir;
}

int incidence_of(const WhiteGraph& g, int v, int edge)
{
    const auto& inc = g.incident[v];
    for (int k = 0; k < static_cast<int>(inc.size()); ++k)
        if (inc[k].edge == edge)
            return k;
    return -1;
}

double edge_length(const Labelling& alpha, const Eigen::VectorXd& r, int e, int u, int v)
{
    return kite(alpha.alpha[e], r[u], r[v]).L;
}

std::vector<double> directions_of(const CirclePattern& p, const WhiteGraph& g, const Labelling& alpha,
                                  const Eigen::VectorXd& rho, int v)
{
    if (g.incident[v].empty())
        return {};
    double d0;
    if (static_cast<int>(p.direction0.size()) == g.num_vertices) {
        d0 = p.direction0[v];
    } else {
        const Point delta = p.center[g.incident[v][0].neighbor] - p.center[v];
        d0 = std::atan2(delta.y(), delta.x());
    }
    return fan_directions(g, alpha, rho, v, 0, d0);
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Box {
    double x0, y0, x1, y1;
};

Box box_of(const std::array<Point, 4>& k)
{
    Box b{k[0].x(), k[0].y(), k[0].x(), k[0].y()};
    for (const auto& p : k) {
        b.x0 = std::min(b.x0, p.x());
        b.y0 = std::min(b.y0, p.y());
        b.x1 = std::max(b.x1, p.x());
        b.y1 = std::max(b.y1, p.y());
    }
    return b;
}

using Tri = std::array<Point, 3>;

/// Largest separation of the two triangles along the edge normals; positive
/// when a separating axis exists.
double separation(const Tri& a, const Tri& b)
{
    double best = -std::numeric_limits<double>::infinity();
    for (const Tri* t : {&a, &b})
        for (int k = 0; k < 3; ++k) {
            const Point e = (*t)[(k + 1) % 3] - (*t)[k];
            Point n(-e.y(), e.x());
            const double len = n.norm();
            if (len == 0.0)
                continue;
            n /= len;
            double amin = std::numeric_limits<double>::infinity(), amax = -amin;
            double bmin = amin, bmax = -amin;
            for (const auto& p : a) {
                amin = std::min(amin, n.dot(p));
                amax = std::max(amax, n.dot(p));
            }
            for (const auto& p : b) {
                bmin = std::min(bmin, n.dot(p));
                bmax = std::max(bmax, n.dot(p));
            }
            best = std::max(best, std::max(bmin - amax, amin - bmax));
        }
    return best;
}

std::array<Tri, 2> split(const std::array<Point, 4>& k)
{
    return {Tri{k[0], k[1], k[2]}, Tri{k[0], k[2], k[3]}};
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

}  // namespace

CirclePattern layout(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r,
                     const Anchor& anchor, const LayoutOptions& opts)
{
    if (opts.check_residual) {
        const Eigen::VectorXd res = residual(g, alpha, r);
        if (res.size() && res.lpNorm<Eigen::Infinity>() > opts.residual_tol)
            throw Error(ErrorKind::NotASolution,
                        "layout: angle-sum residual " + std::to_string(res.lpNorm<Eigen::Infinity>()) +
                            " exceeds tolerance");
    } else if (r.size() != g.num_vertices || !(r.array() > 0).all()) {
        throw Error(ErrorKind::MissingRadius, "layout: radii must be positive on every vertex");
    }
    if (anchor.root < 0 || anchor.root >= g.num_vertices)
        throw Error(ErrorKind::InvalidArgument, "layout: anchor root out of range");

    const Eigen::VectorXd rho = r.array().log().matrix();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CirclePattern p;
    p.center.assign(g.num_vertices, Point(nan, nan));
    p.black.assign(g.num_black, Point(nan, nan));
    p.radius = r;
    p.anchor = anchor;
    p.tree_edge.assign(g.num_edges(), 0);
    p.direction0.assign(g.num_vertices, nan);

    std::vector<std::vector<double>> dirs(g.num_vertices);
    std::vector<char> placed(g.num_vertices, 0), black_set(g.num_black, 0);
    std::deque<int> queue;
    p.center[anchor.root] = anchor.position;
    dirs[anchor.root] = fan_directions(g, alpha, rho, anchor.root, 0, anchor.direction);
    placed[anchor.root] = 1;
    queue.push_back(anchor.root);

    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        const auto& inc = g.incident[u];
        if (!inc.empty())
            p.direction0[u] = dirs[u][0];
        for (int k = 0; k < static_cast<int>(inc.size()); ++k) {
            const double gamma = half_angle(g, alpha, rho, u, k);
            for (auto [b, sign] : {std::pair{inc[k].black_minus, -1.0}, std::pair{inc[k].black_plus, 1.0}})
                if (!black_set[b]) {
                    p.black[b] = p.center[u] + polar(r[u], dirs[u][k] + sign * gamma);
                    black_set[b] = 1;
                }
        }
        std::vector<int> order(inc.size());
        for (int k = 0; k < static_cast<int>(inc.size()); ++k)
            order[k] = k;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::pair{inc[a].neighbor, inc[a].edge} < std::pair{inc[b].neighbor, inc[b].edge};
        });
        for (int k : order) {
            const int v = inc[k].neighbor;
            if (placed[v])
                continue;
            const int e = inc[k].edge;
            p.center[v] = p.center[u] + polar(edge_length(alpha, r, e, u, v), dirs[u][k]);
            dirs[v] = fan_directions(g, alpha, rho, v, incidence_of(g, v, e), dirs[u][k] + std::numbers::pi);
            placed[v] = 1;
            p.tree_edge[e] = 1;
            queue.push_back(v);
        }
    }
    for (int v = 0; v < g.num_vertices; ++v)
        if (!placed[v])
            throw Error(ErrorKind::InvalidArgument, "layout: white graph is not connected");
    return p;
}

ClosureReport closure_residual(const CirclePattern& p, const WhiteGraph& g, const Labelling& alpha)
{
    const Eigen::VectorXd rho = p.radius.array().log().matrix();
    ClosureReport rep;
    rep.per_edge = Eigen::VectorXd::Zero(g.num_edges());
    for (int u = 0; u < g.num_vertices; ++u) {
        const auto dir = directions_of(p, g, alpha, rho, u);
        for (int k = 0; k < static_cast<int>(g.incident[u].size()); ++k) {
            const auto& inc = g.incident[u][k];
            if (!p.tree_edge.empty() && p.tree_edge[inc.edge])
                continue;
            const Point predicted =
                p.center[u] + polar(edge_length(alpha, p.radius, inc.edge, u, inc.neighbor), dir[k]);
            const double miss = (predicted - p.center[inc.neighbor]).norm();
            rep.per_edge[inc.edge] = std::max(rep.per_edge[inc.edge], miss);
        }
    }
    rep.max_residual = g.num_edges() ? rep.per_edge.maxCoeff() : 0.0;
    return rep;
}

double black_point_discrepancy(const CirclePattern& p, const WhiteGraph& g, const Labelling& alpha)
{
    const Eigen::VectorXd rho = p.radius.array().log().matrix();
    double worst = 0.0;
    for (int u = 0; u < g.num_vertices; ++u) {
        const auto dir = directions_of(p, g, alpha, rho, u);
        for (int k = 0; k < static_cast<int>(g.incident[u].size()); ++k) {
            const auto& inc = g.incident[u][k];
            const double gamma = half_angle(g, alpha, rho, u, k);
            const Point bm = p.center[u] + polar(p.radius[u], dir[k] - gamma);
            const Point bp = p.center[u] + polar(p.radius[u], dir[k] + gamma);
            worst = std::max(worst, (bm - p.black[inc.black_minus]).norm());
            worst = std::max(worst, (bp - p.black[inc.black_plus]).norm());
        }
    }
    return worst;
}

double pattern_diameter(const CirclePattern& p)
{
    if (p.center.empty())
        return 0.0;
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (std::size_t v = 0; v < p.center.size(); ++v) {
        const double r = p.radius[static_cast<Eigen::Index>(v)];
        x0 = std::min(x0, p.center[v].x() - r);
        y0 = std::min(y0, p.center[v].y() - r);
        x1 = std::max(x1, p.center[v].x() + r);
        y1 = std::max(y1, p.center[v].y() + r);
    }
    return std::hypot(x1 - x0, y1 - y0);
}

KitePattern kites(const CirclePattern& p, const WhiteGraph& g)
{
    KitePattern k;
    k.kites.reserve(g.edges.size());
    for (const auto& e : g.edges)
        k.kites.push_back({p.center[e.v0], p.black[e.b1], p.center[e.v1], p.black[e.b3]});
    return k;
}

bool kite_is_convex(const std::array<Point, 4>& k)
{
    for (int i = 0; i < 4; ++i)
        if (cross(k[(i + 1) % 4] - k[i], k[(i + 2) % 4] - k[(i + 1) % 4]) < 0.0)
            return false;
    return true;
}

EmbeddingReport check_embedded(const KitePattern& k, const WhiteGraph& g)
{
    EmbeddingReport rep;
    const int n = static_cast<int>(k.kites.size());
    if (n != g.num_edges())
        throw Error(ErrorKind::InvalidArgument, "kite pattern does not match the graph");
    double scale = 0.0;
    std::vector<Box> boxes(n);
    for (int e = 0; e < n; ++e) {
        boxes[e] = box_of(k.kites[e]);
        scale = std::max({scale, boxes[e].x1 - boxes[e].x0, boxes[e].y1 - boxes[e].y0});
        // each kite must be positively oriented
        const auto& q = k.kites[e];
        if (cross(q[1] - q[0], q[2] - q[0]) <= 0.0 || cross(q[2] - q[0], q[3] - q[0]) <= 0.0) {
            rep.embedded = false;
            rep.kite_a = rep.kite_b = e;
            return rep;
        }
    }
    const double tol = 1e-9 * scale;
    std::vector<int> order(n);
    for (int e = 0; e < n; ++e)
        order[e] = e;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::pair{boxes[a].x0, a} < std::pair{boxes[b].x0, b};
    });
    auto shares_vertex = [&](int a, int b) {
        const auto& ea = g.edges[a];
        const auto& eb = g.edges[b];
        return ea.v0 == eb.v0 || ea.v0 == eb.v1 || ea.v1 == eb.v0 || ea.v1 == eb.v1 || ea.b1 == eb.b1 ||
               ea.b1 == eb.b3 || ea.b3 == eb.b1 || ea.b3 == eb.b3;
    };
    std::pair<int, int> first{n, n};
    for (int i = 0; i < n; ++i) {
        const int a = order[i];
        for (int j = i + 1; j < n; ++j) {
            const int b = order[j];
            if (boxes[b].x0 > boxes[a].x1 + tol)
                break;
            if (boxes[b].y0 > boxes[a].y1 + tol || boxes[a].y0 > boxes[b].y1 + tol)
                continue;
            const bool adjacent = shares_vertex(a, b);
            bool clash = false;
            for (const auto& ta : split(k.kites[a]))
                for (const auto& tb : split(k.kites[b])) {
                    const double sep = separation(ta, tb);
                    if (adjacent ? sep < -tol : sep < tol)
                        clash = true;
                }
            if (clash)
                first = std::min(first, std::pair{std::min(a, b), std::max(a, b)});
        }
    }
    if (first.first < n) {
        rep.embedded = false;
        rep.kite_a = first.first;
        rep.kite_b = first.second;
    }
    return rep;
}

std::string to_svg(const CirclePattern& p, const WhiteGraph& g, const SvgOptions& opts)
{
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    auto grow = [&](const Point& c, double r) {
        x0 = std::min(x0, c.x() - r);
        y0 = std::min(y0, c.y() - r);
        x1 = std::max(x1, c.x() + r);
        y1 = std::max(y1, c.y() + r);
    };
    for (std::size_t v = 0; v < p.center.size(); ++v)
        grow(p.center[v], opts.circles ? p.radius[static_cast<Eigen::Index>(v)] : 0.0);
    for (const auto& b : p.black)
        grow(b, 0.0);
    const bool empty = p.center.empty();
    const double span = empty ? 1.0 : std::max(x1 - x0, y1 - y0);
    const double scale = (opts.width - 2 * opts.margin) / (span > 0 ? span : 1.0);
    const double height = empty ? opts.width : 2 * opts.margin + (y1 - y0) * scale;
    auto X = [&](const Point& q) { return fmt(opts.margin + (q.x() - x0) * scale); };
    auto Y = [&](const Point& q) { return fmt(opts.margin + (y1 - q.y()) * scale); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(opts.width) +
         "\" height=\"" + fmt(height) + "\">\n";
    if (!empty && opts.kites) {
        s += "<g fill=\"#e8eef5\" stroke=\"#6a7f99\" stroke-width=\"0.5\">\n";
        for (const auto& k : kites(p, g).kites) {
            s += "<path d=\"M " + X(k[0]) + " " + Y(k[0]);
            for (int i = 1; i < 4; ++i)
                s += " L " + X(k[i]) + " " + Y(k[i]);
            s += " Z\"/>\n";
        }
        s += "</g>\n";
    }
    if (!empty && opts.circles) {
        s += "<g fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"0.75\">\n";
        for (std::size_t v = 0; v < p.center.size(); ++v)
            s += "<circle cx=\"" + X(p.center[v]) + "\" cy=\"" + Y(p.center[v]) + "\" r=\"" +
                 fmt(p.radius[static_cast<Eigen::Index>(v)] * scale) + "\"/>\n";
        s += "</g>\n";
    }
    if (!empty && opts.vertices) {
        s += "<g fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.5\">\n";
        for (const auto& c : p.center)
            s += "<circle cx=\"" + X(c) + "\" cy=\"" + Y(c) + "\" r=\"2.000000\"/>\n";
        s += "</g>\n<g fill=\"#000000\">\n";
        for (const auto& b : p.black)
            s += "<circle cx=\"" + X(b) + "\" cy=\"" + Y(b) + "\" r=\"2.000000\"/>\n";
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

void save_pattern(const std::string& path, const CirclePattern& p)
{
    auto points = [](const std::vector<Point>& pts) {
        json a = json::array();
        for (const auto& q : pts)
            a.push_back(json::array({q.x(), q.y()}));
        return a;
    };
    json doc;
    doc["center"] = points(p.center);
    doc["radius"] = std::vector<double>(p.radius.data(), p.radius.data() + p.radius.size());
    doc["black"] = points(p.black);
    doc["anchor"] = {{"root", p.anchor.root},
                     {"position", json::array({p.anchor.position.x(), p.anchor.position.y()})},
                     {"direction", p.anchor.direction}};
    write_json_file(path, doc);
}

CirclePattern load_pattern(const std::string& path)
{
    const json doc = read_json_file(path);
    auto points = [&](const char* field) {
        const json& a = require_field(doc, field);
        if (!a.is_array())
            throw Error(ErrorKind::ParseError, path + ": field '" + field + "' must be an array");
        std::vector<Point> out;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (!a[k].is_array() || a[k].size() != 2 || !a[k][0].is_number() || !a[k][1].is_number())
                throw Error(ErrorKind::ParseError,
                            path + ": " + field + "[" + std::to_string(k) + "] must be [x, y]");
            out.emplace_back(a[k][0].get<double>(), a[k][1].get<double>());
        }
        return out;
    };
    CirclePattern p;
    p.center = points("center");
    p.black = points("black");
    const auto r = read_dense_array(doc, "radius", path);
    if (r.size() != p.center.size())
        throw Error(ErrorKind::ParseError, path + ": one radius per center expected");
    p.radius = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    if (doc.contains("anchor")) {
        const json& a = doc["anchor"];
        try {
            p.anchor.root = a.at("root").get<int>();
            p.anchor.position = Point(a.at("position").at(0).get<double>(), a.at("position").at(1).get<double>());
            p.anchor.direction = a.at("direction").get<double>();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ParseError, path + ": malformed anchor: " + e.what());
        }
    }
    return p;
}

CirclePattern transform(const CirclePattern& p, std::complex<double> a, std::complex<double> b)
{
    auto map = [&](const Point& q) {
        const std::complex<double> z = a * std::complex<double>(q.x(), q.y()) + b;
        return Point(z.real(), z.imag());
    };
    CirclePattern out = p;
    for (auto& c : out.center)
        c = map(c);
    for (auto& q : out.black)
        q = map(q);
    out.radius *= std::abs(a);
    out.anchor.position = map(p.anchor.position);
    out.anchor.direction = p.anchor.direction + std::arg(a);
    for (auto& d : out.direction0)
        d += std::arg(a);
    return out;
}

}  // namespace kiteflow
