#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>

#include "kiteflow/bquad.hpp"
#include "kiteflow/error.hpp"

using namespace kiteflow;
using std::numbers::pi;

namespace
{

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("kiteflow_test_" + name)).string();
}

/**
 * Circle centers on a triangular lattice with sublattice A (degree 6) and
 * sublattices B, C (degree 3); black vertices are midpoints of B-C edges.
 */
BQuadGraph hexagonal_fixture(int radius, std::vector<int>& lattice_class)
{
    struct P {
        int i, j;
    };
    auto cls = [](int i, int j) { return (((i - j) % 3) + 3) % 3; };
    std::map<std::pair<int, int>, int> white;
    std::vector<P> pts;
    for (int j = -radius; j <= radius; ++j)
        for (int i = -radius; i <= radius; ++i)
            if (std::abs(i) + std::abs(j) + std::abs(i + j) <= 2 * radius) {
                white[{i, j}] = static_cast<int>(pts.size());
                pts.push_back({i, j});
                lattice_class.push_back(cls(i, j) == 0 ? 0 : 1);
            }
    const int dirs[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> black;
    int next = static_cast<int>(pts.size());
    auto black_id = [&](std::pair<int, int> a, std::pair<int, int> b) {
        auto key = std::minmax(a, b);
        auto it = black.find({key.first, key.second});
        if (it != black.end())
            return it->second;
        black[{key.first, key.second}] = next;
        return next++;
    };
    std::vector<QuadCorners> quads;
    for (const auto& p : pts) {
        if (cls(p.i, p.j) != 0)
            continue;
        for (int d = 0; d < 6; ++d) {
            const std::pair<int, int> b{p.i + dirs[d][0], p.j + dirs[d][1]};
            const std::pair<int, int> cm{p.i + dirs[(d + 5) % 6][0], p.j + dirs[(d + 5) % 6][1]};
            const std::pair<int, int> cp{p.i + dirs[(d + 1) % 6][0], p.j + dirs[(d + 1) % 6][1]};
            if (!white.count(b) || !white.count(cm) || !white.count(cp))
                continue;
            // ccw around the edge: center, clockwise black, neighbour, counterclockwise black
            quads.push_back({white[{p.i, p.j}], black_id(b, cm), white[b], black_id(b, cp)});
        }
    }
    return build_bquad(quads);
}

}  // namespace

TEST_CASE("single quad")
{
    const auto g = build_bquad({{0, 1, 2, 3}});
    CHECK(g.white_vertices() == std::vector<int>{0, 2});
    CHECK(g.black_vertices() == std::vector<int>{1, 3});
    for (int v = 0; v < 4; ++v)
        CHECK(g.vertex_is_boundary(v));
    CHECK(g.quad_is_boundary(0));
    const auto w = derive_white_graph(g);
    CHECK(w.num_vertices == 2);
    CHECK(w.num_edges() == 1);
    CHECK(w.interior_vertices.empty());
}

TEST_CASE("validation errors")
{
    CHECK(kind_of([] { build_bquad({{0, 1, 0, 3}}); }) == ErrorKind::NotStronglyRegular);
    // vertex 2 used white in one quad and black in another
    CHECK(kind_of([] { build_bquad({{0, 1, 2, 3}, {4, 2, 5, 6}}); }) == ErrorKind::NonBipartite);
    // two quads glued along two edges
    CHECK(kind_of([] { build_bquad({{0, 1, 2, 3}, {2, 1, 0, 3}}); }) == ErrorKind::NotStronglyRegular);
    // the same edge in three quads
    CHECK(kind_of([] { build_bquad({{0, 1, 2, 3}, {4, 1, 0, 5}, {6, 1, 0, 7}}); }) ==
          ErrorKind::DanglingEdge);
    // shared edge traversed in the same direction
    CHECK(kind_of([] { build_bquad({{0, 1, 2, 3}, {0, 1, 4, 5}}); }) == ErrorKind::NotStronglyRegular);
    // explicit color list disagreeing with corner positions
    CHECK(kind_of([] { build_bquad({{0, 1, 2, 3}}, {0, 1}, {2, 3}); }) == ErrorKind::NonBipartite);
    CHECK(kind_of([] { build_bquad({{0, 1, 2, 3}}, {0, 2, 4}, {1, 3}); }) == ErrorKind::DanglingEdge);
}

TEST_CASE("2x2 grid by hand")
{
    const auto [g, alpha] = generate_square_grid(2, 2, pi / 2);
    // 9 lattice points; (i+j) even are white: 5 white, 4 black
    CHECK(g.white_vertices().size() == 5);
    CHECK(g.black_vertices().size() == 4);
    CHECK(g.num_quads() == 4);
    // the center (1,1) is white and the only interior vertex
    int interior = 0;
    for (int v = 0; v < g.num_vertices(); ++v)
        interior += !g.vertex_is_boundary(v);
    CHECK(interior == 1);
    CHECK(g.is_white(2));  // row-major whites: (0,0),(2,0),(1,1),(0,2),(2,2)
    CHECK_FALSE(g.vertex_is_boundary(2));
    for (int q = 0; q < 4; ++q)
        CHECK(g.quad_is_boundary(q));

    // origin black: the center is black and interior
    const auto [h, beta] = generate_square_grid(2, 2, pi / 2, false);
    CHECK(h.white_vertices().size() == 4);
    int interior_black = 0;
    for (int b : h.black_vertices())
        interior_black += !h.vertex_is_boundary(b);
    CHECK(interior_black == 1);
    CHECK(check_admissible(h, beta).admissible);
}

TEST_CASE("3x3 white graph degrees")
{
    const auto [g, alpha] = generate_square_grid(3, 3, pi / 2);
    const auto w = derive_white_graph(g);
    CHECK(w.num_edges() == g.num_quads());
    // 16 lattice points, 8 white; the white graph is the rotated grid of circle centers
    CHECK(w.num_vertices == 8);
    for (int v : w.interior_vertices)
        CHECK(w.incident[v].size() == 4);
    for (int e = 0; e < w.num_edges(); ++e) {
        const auto& q = g.quad(e);
        CHECK(w.white_ids[w.edges[e].v0] == q[0]);
        CHECK(w.white_ids[w.edges[e].v1] == q[2]);
    }
    // cyclic order: consecutive incidences share a black vertex
    for (int v = 0; v < w.num_vertices; ++v) {
        const auto& inc = w.incident[v];
        for (std::size_t k = 0; k + 1 < inc.size(); ++k)
            CHECK(inc[k].black_plus == inc[k + 1].black_minus);
        if (!w.is_boundary(v))
            CHECK(inc.back().black_plus == inc.front().black_minus);
    }
}

TEST_CASE("cyclic order is counterclockwise on the lattice")
{
    std::vector<Eigen::Vector2i> cells;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            cells.emplace_back(i, j);
    const auto gc = grid_complex(cells);
    const auto w = derive_white_graph(gc.graph);
    for (int v : w.interior_vertices) {
        const auto& inc = w.incident[v];
        const Eigen::Vector2i c = gc.lattice[w.white_ids[v]];
        double total = 0;
        for (std::size_t k = 0; k < inc.size(); ++k) {
            const Eigen::Vector2i a = gc.lattice[w.white_ids[inc[k].neighbor]] - c;
            const Eigen::Vector2i b = gc.lattice[w.white_ids[inc[(k + 1) % inc.size()].neighbor]] - c;
            const double turn = std::atan2(a.x() * b.y() - a.y() * b.x(), a.x() * b.x() + a.y() * b.y());
            CHECK(turn > 0);
            total += turn;
        }
        CHECK(total == doctest::Approx(2 * pi));
    }
}

TEST_CASE("hexagonal fixture")
{
    std::vector<int> cls;
    const auto g = hexagonal_fixture(4, cls);
    const auto w = derive_white_graph(g);
    REQUIRE(!w.interior_vertices.empty());
    int six = 0, three = 0;
    for (int v : w.interior_vertices) {
        const auto deg = w.incident[v].size();
        if (cls[w.white_ids[v]] == 0) {
            CHECK(deg == 6);
            ++six;
        } else {
            CHECK(deg == 3);
            ++three;
        }
        // neighbours are always in the other class
        for (const auto& inc : w.incident[v])
            CHECK(cls[w.white_ids[inc.neighbor]] != cls[w.white_ids[v]]);
    }
    CHECK(six > 0);
    CHECK(three > 0);
    // rhombic faces: every interior black vertex has degree 4
    for (int b : g.black_vertices())
        if (!g.vertex_is_boundary(b))
            CHECK(g.fan(b).size() == 4);
}

TEST_CASE("admissibility")
{
    CHECK(check_admissible(generate_square_grid(4, 4, pi / 2).first, generate_square_grid(4, 4, pi / 2).second)
              .admissible);
    const auto [g, a] = generate_square_grid(3, 3, pi / 3);
    const auto rep = check_admissible(g, a);
    CHECK_FALSE(rep.admissible);
    int interior_black = 0;
    for (int b : g.black_vertices())
        interior_black += !g.vertex_is_boundary(b);
    CHECK(rep.violations.size() == static_cast<std::size_t>(interior_black));
    for (const auto& [b, sum] : rep.violations)
        CHECK(sum == doctest::Approx(4 * pi / 3));

    // mixed angles around one interior black vertex
    const auto [h, beta0] = generate_square_grid(2, 2, pi / 2, false);
    int center = -1;
    for (int b : h.black_vertices())
        if (!h.vertex_is_boundary(b))
            center = b;
    Labelling mixed = beta0;
    const double angles[4] = {pi / 2, pi / 2, pi / 3, 2 * pi / 3};
    for (std::size_t k = 0; k < h.fan(center).size(); ++k)
        mixed.alpha[h.fan(center)[k]] = angles[k];
    CHECK(check_admissible(h, mixed).admissible);

    Labelling bad = beta0;
    bad.alpha[0] = 3.5;
    CHECK(kind_of([&] { check_admissible(h, bad); }) == ErrorKind::AngleOutOfRange);
}

TEST_CASE("square grids are admissible up to 32x32")
{
    for (int n = 1; n <= 32; ++n)
        for (int m = 1; m <= 32; ++m) {
            const auto [g, a] = generate_square_grid(n, m, pi / 2);
            REQUIRE(g.num_quads() == n * m);
            REQUIRE(derive_white_graph(g).num_edges() == n * m);
            for (int b : g.black_vertices())
                if (!g.vertex_is_boundary(b))
                    REQUIRE(g.fan(b).size() == 4);
            REQUIRE(check_admissible(g, a).admissible);
        }
}

TEST_CASE("file round trip and errors")
{
    const auto [g, a] = generate_square_grid(4, 4, pi / 2);
    const std::string path = temp_path("grid.json");
    save_bquad(path, g, a);
    const auto [g2, a2] = load_bquad(path);
    CHECK(g2.quads() == g.quads());
    CHECK(g2.white_vertices() == g.white_vertices());
    CHECK(g2.black_vertices() == g.black_vertices());
    CHECK(a2.alpha == a.alpha);
    const auto w1 = derive_white_graph(g), w2 = derive_white_graph(g2);
    for (int v = 0; v < w1.num_vertices; ++v)
        for (std::size_t k = 0; k < w1.incident[v].size(); ++k) {
            CHECK(w1.incident[v][k].edge == w2.incident[v][k].edge);
            CHECK(w1.incident[v][k].neighbor == w2.incident[v][k].neighbor);
        }

    const std::string bad = temp_path("bad.json");
    {
        std::ofstream(bad) << R"({"white":[0,2],"black":[1,3],"quads":[[0,1,2,3]],"alpha":[3.5]})";
    }
    CHECK(kind_of([&] { load_bquad(bad); }) == ErrorKind::AngleOutOfRange);
    {
        std::ofstream(bad) << R"({"white":[0,2],"black":[1,3],"quads":[[0,1,2,7]],"alpha":[1.0]})";
    }
    CHECK(kind_of([&] { load_bquad(bad); }) == ErrorKind::ParseError);
    {
        std::ofstream(bad) << "{\"white\":[0,2],\n\"black\":[1,3,\n";
    }
    try {
        load_bquad(bad);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    CHECK(kind_of([&] { load_bquad(temp_path("missing.json")); }) == ErrorKind::IOError);
    std::remove(path.c_str());
    std::remove(bad.c_str());
}
