#include "kiteflow/bquad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "kiteflow/error.hpp"
#include "kiteflow/io.hpp"

namespace kiteflow
{

namespace
{

std::string quad_name(int q) { return "quad " + std::to_string(q); }

struct EdgeUse {
    int quad;
    int from;  // direction of traversal inside the quad
};

}  // namespace

struct BQuadBuilder {
    static BQuadGraph build(std::vector<QuadCorners> quads, const std::vector<int>* white,
                            const std::vector<int>* black);
};

BQuadGraph BQuadBuilder::build(std::vector<QuadCorners> quads, const std::vector<int>* white,
                               const std::vector<int>* black)
{
    if (quads.empty())
        throw Error(ErrorKind::InvalidArgument, "b-quad-graph needs at least one quad");

    int max_id = -1;
    for (int q = 0; q < static_cast<int>(quads.size()); ++q) {
        for (int k = 0; k < 4; ++k) {
            if (quads[q][k] < 0)
                throw Error(ErrorKind::InvalidArgument, quad_name(q) + ": negative vertex id");
            max_id = std::max(max_id, quads[q][k]);
        }
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (quads[q][a] == quads[q][b])
                    throw Error(ErrorKind::NotStronglyRegular,
                                quad_name(q) + ": repeated corner " + std::to_string(quads[q][a]));
    }
    if (white && black) {
        for (int v : *white) max_id = std::max(max_id, v);
        for (int v : *black) max_id = std::max(max_id, v);
    }
    const int n = max_id + 1;

    // colors: 0 unknown, 1 white, 2 black
    std::vector<char> color(n, 0);
    if (white && black) {
        for (int v : *white) {
            if (v < 0 || color[v] != 0)
                throw Error(ErrorKind::InvalidArgument, "vertex " + std::to_string(v) + " listed twice");
            color[v] = 1;
        }
        for (int v : *black) {
            if (v < 0 || color[v] != 0)
                throw Error(ErrorKind::NonBipartite,
                            "vertex " + std::to_string(v) + " listed as both white and black");
            color[v] = 2;
        }
        for (int v = 0; v < n; ++v)
            if (color[v] == 0)
                throw Error(ErrorKind::InvalidArgument,
                            "vertex ids are not dense: " + std::to_string(v) + " missing");
    }
    std::vector<char> used(n, 0);
    for (int q = 0; q < static_cast<int>(quads.size()); ++q) {
        for (int k = 0; k < 4; ++k) {
            const int v = quads[q][k];
            const char want = (k % 2 == 0) ? 1 : 2;
            if (color[v] == 0)
                color[v] = want;
            else if (color[v] != want)
                throw Error(ErrorKind::NonBipartite,
                            quad_name(q) + ": vertex " + std::to_string(v) + " at corner " +
                                std::to_string(k) + " has the wrong color");
            used[v] = 1;
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!used[v]) {
            if (white && black)
                throw Error(ErrorKind::DanglingEdge,
                            "vertex " + std::to_string(v) + " belongs to no quad");
            throw Error(ErrorKind::InvalidArgument,
                        "vertex ids are not dense: " + std::to_string(v) + " missing");
        }
    }

    // undirected edge -> uses
    std::map<std::pair<int, int>, std::vector<EdgeUse>> edges;
    for (int q = 0; q < static_cast<int>(quads.size()); ++q) {
        for (int k = 0; k < 4; ++k) {
            const int a = quads[q][k], b = quads[q][(k + 1) % 4];
            edges[{std::min(a, b), std::max(a, b)}].push_back({q, a});
        }
    }
    std::map<std::pair<int, int>, int> shared;
    for (const auto& [key, uses] : edges) {
        if (uses.size() > 2)
            throw Error(ErrorKind::DanglingEdge,
                        "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                            ") lies in " + std::to_string(uses.size()) + " quads");
        if (uses.size() == 2) {
            if (uses[0].from == uses[1].from)
                throw Error(ErrorKind::NotStronglyRegular,
                            quad_name(uses[1].quad) + ": orientation inconsistent with " +
                                quad_name(uses[0].quad));
            const auto pair = std::minmax(uses[0].quad, uses[1].quad);
            if (++shared[{pair.first, pair.second}] > 1)
                throw Error(ErrorKind::NotStronglyRegular,
                            quad_name(pair.second) + " shares more than one edge with " +
                                quad_name(pair.first));
        }
    }

    BQuadGraph g;
    g.quads_ = std::move(quads);
    const int nq = static_cast<int>(g.quads_.size());
    g.is_white_.assign(n, 0);
    g.color_index_.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        if (color[v] == 1) {
            g.is_white_[v] = 1;
            g.color_index_[v] = static_cast<int>(g.white_.size());
            g.white_.push_back(v);
        } else {
            g.color_index_[v] = static_cast<int>(g.black_.size());
            g.black_.push_back(v);
        }
    }

    g.quad_boundary_.assign(nq, 0);
    g.vertex_boundary_.assign(n, 0);
    for (const auto& [key, uses] : edges) {
        if (uses.size() == 1) {
            g.quad_boundary_[uses[0].quad] = 1;
            g.vertex_boundary_[key.first] = 1;
            g.vertex_boundary_[key.second] = 1;
        }
    }

    // fans
    std::vector<std::vector<int>> incident(n);
    for (int q = 0; q < nq; ++q)
        for (int k = 0; k < 4; ++k)
            incident[g.quads_[q][k]].push_back(q);
    g.fans_.assign(n, {});
    for (int v = 0; v < n; ++v) {
        std::map<int, int> by_forward, by_backward;
        for (int q : incident[v]) {
            const int i = g.corner_position(q, v);
            by_forward[g.quads_[q][(i + 1) % 4]] = q;
            by_backward[g.quads_[q][(i + 3) % 4]] = q;
        }
        auto forward = [&](int q) { return g.quads_[q][(g.corner_position(q, v) + 1) % 4]; };
        auto backward = [&](int q) { return g.quads_[q][(g.corner_position(q, v) + 3) % 4]; };

        int start = incident[v].front();
        if (g.vertex_boundary_[v]) {
            start = -1;
            for (int q : incident[v])
                if (!by_backward.count(forward(q))) {
                    start = q;
                    break;
                }
            if (start < 0)
                throw Error(ErrorKind::NotStronglyRegular,
                            "vertex " + std::to_string(v) + " is not a disk or half-disk point");
        }
        std::vector<int>& fan = g.fans_[v];
        int q = start;
        while (true) {
            fan.push_back(q);
            auto it = by_forward.find(backward(q));
            if (it == by_forward.end() || it->second == start)
                break;
            q = it->second;
            if (fan.size() > incident[v].size())
                break;
        }
        if (fan.size() != incident[v].size())
            throw Error(ErrorKind::NotStronglyRegular,
                        "vertex " + std::to_string(v) + " is not a disk or half-disk point");
    }
    return g;
}

int BQuadGraph::corner_position(int q, int id) const
{
    for (int k = 0; k < 4; ++k)
        if (quads_[q][k] == id)
            return k;
    return -1;
}

BQuadGraph build_bquad(std::vector<QuadCorners> quads)
{
    return BQuadBuilder::build(std::move(quads), nullptr, nullptr);
}

BQuadGraph build_bquad(std::vector<QuadCorners> quads, const std::vector<int>& white,
                       const std::vector<int>& black)
{
    return BQuadBuilder::build(std::move(quads), &white, &black);
}

WhiteGraph derive_white_graph(const BQuadGraph& d)
{
    WhiteGraph g;
    g.num_vertices = static_cast<int>(d.white_vertices().size());
    g.num_black = static_cast<int>(d.black_vertices().size());
    g.white_ids = d.white_vertices();
    g.black_ids = d.black_vertices();
    g.edges.reserve(d.num_quads());
    for (const auto& q : d.quads())
        g.edges.push_back({d.color_index(q[0]), d.color_index(q[2]), d.color_index(q[1]), d.color_index(q[3])});
    g.incident.assign(g.num_vertices, {});
    g.boundary.assign(g.num_vertices, 0);
    g.interior_index.assign(g.num_vertices, -1);
    g.boundary_index.assign(g.num_vertices, -1);
    for (int v = 0; v < g.num_vertices; ++v) {
        const int id = g.white_ids[v];
        for (int q : d.fan(id)) {
            const int i = d.corner_position(q, id);
            const auto& c = d.quad(q);
            g.incident[v].push_back({q, d.color_index(c[(i + 2) % 4]), d.color_index(c[(i + 1) % 4]),
                                     d.color_index(c[(i + 3) % 4])});
        }
        if (d.vertex_is_boundary(id)) {
            g.boundary[v] = 1;
            g.boundary_index[v] = static_cast<int>(g.boundary_vertices.size());
            g.boundary_vertices.push_back(v);
        } else {
            g.interior_index[v] = static_cast<int>(g.interior_vertices.size());
            g.interior_vertices.push_back(v);
        }
    }
    return g;
}

void validate_labelling(const BQuadGraph& d, const Labelling& alpha)
{
    if (alpha.alpha.size() != d.num_quads())
        throw Error(ErrorKind::InvalidArgument,
                    "labelling has " + std::to_string(alpha.alpha.size()) + " entries for " +
                        std::to_string(d.num_quads()) + " quads");
    for (int q = 0; q < d.num_quads(); ++q) {
        const double a = alpha.alpha[q];
        if (!(a > 0.0 && a < std::numbers::pi))
            throw Error(ErrorKind::AngleOutOfRange,
                        quad_name(q) + ": alpha = " + std::to_string(a) + " outside (0, pi)");
    }
}

AdmissibilityReport check_admissible(const BQuadGraph& d, const Labelling& alpha)
{
    validate_labelling(d, alpha);
    AdmissibilityReport report;
    for (int b : d.black_vertices()) {
        if (d.vertex_is_boundary(b))
            continue;
        double sum = 0.0;
        for (int q : d.fan(b))
            sum += alpha.alpha[q];
        if (std::abs(sum - 2.0 * std::numbers::pi) > kAdmissibilityTol) {
            report.admissible = false;
            report.violations.emplace_back(b, sum);
        }
    }
    return report;
}

GridComplex grid_complex(const std::vector<Eigen::Vector2i>& cells, bool origin_white)
{
    auto white_at = [&](int i, int j) { return (((i + j) % 2 + 2) % 2 == 0) == origin_white; };
    auto key = [](int i, int j) { return std::pair<int, int>{j, i}; };  // row-major

    std::set<std::pair<int, int>> pts;
    std::set<std::pair<int, int>> cell_set;
    for (const auto& c : cells) {
        if (!cell_set.insert({c.x(), c.y()}).second)
            throw Error(ErrorKind::InvalidArgument, "duplicate lattice cell");
        for (int di = 0; di <= 1; ++di)
            for (int dj = 0; dj <= 1; ++dj)
                pts.insert(key(c.x() + di, c.y() + dj));
    }
    std::map<std::pair<int, int>, int> id;
    GridComplex out;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& p : pts) {
            const bool w = white_at(p.second, p.first);
            if (w == (pass == 0)) {
                id[p] = static_cast<int>(out.lattice.size());
                out.lattice.emplace_back(p.second, p.first);
            }
        }

    std::vector<QuadCorners> quads;
    quads.reserve(cells.size());
    for (const auto& c : cells) {
        const int i = c.x(), j = c.y();
        const std::array<std::pair<int, int>, 4> ring{key(i, j), key(i + 1, j), key(i + 1, j + 1),
                                                      key(i, j + 1)};
        const int s = white_at(i, j) ? 0 : 1;
        QuadCorners q;
        for (int k = 0; k < 4; ++k)
            q[k] = id.at(ring[(s + k) % 4]);
        quads.push_back(q);
    }
    out.graph = build_bquad(std::move(quads));
    return out;
}

std::pair<BQuadGraph, Labelling> generate_square_grid(int n, int m, double alpha0, bool origin_white)
{
    if (n < 1 || m < 1)
        throw Error(ErrorKind::InvalidArgument, "grid dimensions must be positive");
    std::vector<Eigen::Vector2i> cells;
    cells.reserve(static_cast<std::size_t>(n) * m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            cells.emplace_back(i, j);
    GridComplex gc = grid_complex(cells, origin_white);
    Labelling alpha{Eigen::VectorXd::Constant(gc.graph.num_quads(), alpha0)};
    return {std::move(gc.graph), std::move(alpha)};
}

std::pair<BQuadGraph, Labelling> load_bquad(const std::string& path)
{
    const json doc = read_json_file(path);
    auto ids = [&](const char* field) {
        std::vector<int> out;
        const json& a = require_field(doc, field);
        if (!a.is_array())
            throw Error(ErrorKind::ParseError, path + ": field '" + field + "' must be an array");
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (!a[k].is_number_integer())
                throw Error(ErrorKind::ParseError,
                            path + ": " + field + "[" + std::to_string(k) + "] is not an integer");
            out.push_back(a[k].get<int>());
        }
        return out;
    };
    const std::vector<int> white = ids("white");
    const std::vector<int> black = ids("black");
    std::set<int> known(white.begin(), white.end());
    known.insert(black.begin(), black.end());

    const json& jq = require_field(doc, "quads");
    if (!jq.is_array())
        throw Error(ErrorKind::ParseError, path + ": field 'quads' must be an array");
    std::vector<QuadCorners> quads;
    for (std::size_t q = 0; q < jq.size(); ++q) {
        const std::string where = path + ": quads[" + std::to_string(q) + "]";
        if (!jq[q].is_array() || jq[q].size() != 4)
            throw Error(ErrorKind::ParseError, where + " must list 4 vertex ids");
        QuadCorners c;
        for (int k = 0; k < 4; ++k) {
            if (!jq[q][k].is_number_integer())
                throw Error(ErrorKind::ParseError,
                            where + "[" + std::to_string(k) + "] is not an integer");
            c[k] = jq[q][k].get<int>();
            if (!known.count(c[k]))
                throw Error(ErrorKind::ParseError, where + "[" + std::to_string(k) +
                                                       "] references unknown vertex " +
                                                       std::to_string(c[k]));
        }
        quads.push_back(c);
    }

    const json& ja = require_field(doc, "alpha");
    if (!ja.is_array() || ja.size() != jq.size())
        throw Error(ErrorKind::ParseError, path + ": field 'alpha' must have one entry per quad");
    Labelling alpha{Eigen::VectorXd(static_cast<Eigen::Index>(ja.size()))};
    for (std::size_t q = 0; q < ja.size(); ++q) {
        if (!ja[q].is_number())
            throw Error(ErrorKind::ParseError,
                        path + ": alpha[" + std::to_string(q) + "] is not a number");
        alpha.alpha[static_cast<Eigen::Index>(q)] = ja[q].get<double>();
    }

    BQuadGraph g = build_bquad(std::move(quads), white, black);
    validate_labelling(g, alpha);
    return {std::move(g), std::move(alpha)};
}

void save_bquad(const std::string& path, const BQuadGraph& d, const Labelling& alpha)
{
    validate_labelling(d, alpha);
    json doc;
    doc["white"] = d.white_vertices();
    doc["black"] = d.black_vertices();
    json quads = json::array();
    for (const auto& q : d.quads())
        quads.push_back(json::array({q[0], q[1], q[2], q[3]}));
    doc["quads"] = std::move(quads);
    doc["alpha"] = std::vector<double>(alpha.alpha.data(), alpha.alpha.data() + alpha.alpha.size());
    write_json_file(path, doc);
}

}  // namespace kiteflow
