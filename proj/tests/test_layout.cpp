#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "kiteflow/error.hpp"
#include "kiteflow/euclid.hpp"
#include "kiteflow/kernel.hpp"
#include "kiteflow/layout.hpp"

using namespace kiteflow;
using std::numbers::pi;

namespace
{

struct Grid {
    BQuadGraph d;
    Labelling alpha;
    WhiteGraph g;
};

Grid grid(int n, int m, double a = pi / 2)
{
    auto [d, alpha] = generate_square_grid(n, m, a);
    WhiteGraph g = derive_white_graph(d);
    return {std::move(d), std::move(alpha), std::move(g)};
}

Eigen::VectorXd solved(const Grid& s, std::uint64_t seed, double amp)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    Eigen::VectorXd b(static_cast<Eigen::Index>(s.g.boundary_vertices.size()));
    for (Eigen::Index k = 0; k < b.size(); ++k)
        b[k] = std::exp(u(rng));
    return solve_dirichlet(s.g, s.alpha, b).r;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count(const std::string& s, const std::string& needle)
{
    int n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("single right kite")
{
    auto s = grid(1, 1);
    const auto p = layout(s.g, s.alpha, Eigen::VectorXd::Ones(2));
    CHECK(p.center[0].norm() < 1e-15);
    CHECK(std::abs(p.center[1].x() - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(p.center[1].y()) < 1e-15);
    const double h = std::sqrt(2.0) / 2;
    const auto& e = s.g.edges[0];
    CHECK((p.black[e.b1] - Point(h, -h)).norm() < 1e-15);
    CHECK((p.black[e.b3] - Point(h, h)).norm() < 1e-15);

    const auto k = kites(p, s.g);
    CHECK(kite_is_convex(k.kites[0]));
    CHECK(check_embedded(k, s.g).embedded);
    CHECK(closure_residual(p, s.g, s.alpha).max_residual == 0.0);
}

TEST_CASE("isoradial square grid is the square lattice")
{
    std::vector<Eigen::Vector2i> cells;
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i)
            cells.emplace_back(i, j);
    const auto gc = grid_complex(cells);
    const WhiteGraph g = derive_white_graph(gc.graph);
    Labelling alpha{Eigen::VectorXd::Constant(gc.graph.num_quads(), pi / 2)};
    const auto p = layout(g, alpha, Eigen::VectorXd::Ones(g.num_vertices));
    for (int u = 0; u < g.num_vertices; ++u)
        for (int v = 0; v < g.num_vertices; ++v) {
            const double lattice = (gc.lattice[g.white_ids[u]] - gc.lattice[g.white_ids[v]]).cast<double>().norm();
            REQUIRE(std::abs((p.center[u] - p.center[v]).norm() - lattice) < 1e-12);
        }
    CHECK(check_embedded(kites(p, g), g).embedded);
}

TEST_CASE("kite geometry invariants on solved grids")
{
    for (int n : {4, 6, 10, 16}) {
        auto s = grid(n, n);
        const Eigen::VectorXd r = solved(s, 100 + n, 0.6);
        const auto p = layout(s.g, s.alpha, r);
        const double diam = pattern_diameter(p);
        CHECK(closure_residual(p, s.g, s.alpha).max_residual <= 1e-8 * diam);
        CHECK(black_point_discrepancy(p, s.g, s.alpha) <= 1e-9);
        for (const auto& e : s.g.edges) {
            const auto geo = kite(s.alpha.alpha[&e - s.g.edges.data()], r[e.v0], r[e.v1]);
            REQUIRE(std::abs((p.center[e.v1] - p.center[e.v0]).norm() - geo.L) <= 1e-9 * geo.L);
            REQUIRE(std::abs((p.black[e.b3] - p.black[e.b1]).norm() - geo.H) <= 1e-9 * geo.L);
            for (int b : {e.b1, e.b3}) {
                REQUIRE(std::abs((p.black[b] - p.center[e.v0]).norm() - r[e.v0]) <= 1e-9);
                REQUIRE(std::abs((p.black[b] - p.center[e.v1]).norm() - r[e.v1]) <= 1e-9);
            }
        }
        const auto k = kites(p, s.g);
        const auto emb = check_embedded(k, s.g);
        CHECK(emb.embedded);
        for (std::size_t e = 0; e < k.kites.size(); ++e) {
            const auto& we = s.g.edges[e];
            REQUIRE(kite_is_convex(k.kites[e]) == kite(s.alpha.alpha[e], r[we.v0], r[we.v1]).convex);
        }
    }
}

TEST_CASE("closure detects perturbed radii")
{
    auto s = grid(6, 6);
    Eigen::VectorXd r = solved(s, 7, 0.5);
    CHECK_THROWS_AS(
        [&] {
            Eigen::VectorXd bad = r;
            bad[s.g.interior_vertices[5]] *= 1.01;
            layout(s.g, s.alpha, bad);
        }(),
        Error);
    r[s.g.interior_vertices[5]] *= 1.01;
    LayoutOptions opts;
    opts.check_residual = false;
    const auto p = layout(s.g, s.alpha, r, {}, opts);
    CHECK(closure_residual(p, s.g, s.alpha).max_residual > 1e-4 * pattern_diameter(p));
}

TEST_CASE("layout is equivariant in the anchor")
{
    auto s = grid(6, 5);
    const Eigen::VectorXd r = solved(s, 9, 0.5);
    const auto base = layout(s.g, s.alpha, r);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 20; ++k) {
        const double phi = u(rng);
        const Point shift(u(rng), u(rng));
        const auto moved = layout(s.g, s.alpha, r, Anchor{0, shift, phi});
        const auto expect = transform(base, std::polar(1.0, phi), {shift.x(), shift.y()});
        for (int v = 0; v < s.g.num_vertices; ++v)
            REQUIRE((moved.center[v] - expect.center[v]).norm() < 1e-10);
        for (int b = 0; b < s.g.num_black; ++b)
            REQUIRE((moved.black[b] - expect.black[b]).norm() < 1e-10);
    }
}

TEST_CASE("overlap is detected")
{
    auto s = grid(3, 1);
    const auto p = layout(s.g, s.alpha, Eigen::VectorXd::Ones(s.g.num_vertices));
    auto k = kites(p, s.g);
    REQUIRE(check_embedded(k, s.g).embedded);

    // slide the last kite onto the first, which is not adjacent to it
    const Point shift = k.kites[0][0] - k.kites[2][0] + Point(0.1, 0.05);
    for (auto& q : k.kites[2])
        q += shift;
    const auto rep = check_embedded(k, s.g);
    CHECK(!rep.embedded);
    CHECK(rep.kite_a == 0);
    CHECK(rep.kite_b == 2);
}

TEST_CASE("svg output")
{
    const std::string empty = to_svg(CirclePattern{}, WhiteGraph{});
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("</svg>") != std::string::npos);
    CHECK(count(empty, "<circle") == 0);

    auto one = grid(1, 1);
    SvgOptions opts;
    opts.vertices = false;
    const std::string single = to_svg(layout(one.g, one.alpha, Eigen::VectorXd::Ones(2)), one.g, opts);
    CHECK(count(single, "<circle") == 2);
    CHECK(count(single, "<path") == 1);

    auto s = grid(8, 8);
    const auto p = layout(s.g, s.alpha, solved(s, 8, 0.4));
    const std::string doc = to_svg(p, s.g);
    CHECK(doc == to_svg(p, s.g));
    const std::string golden = std::string(KITEFLOW_TEST_DATA) + "/grid8.svg";
    if (std::getenv("KITEFLOW_REGEN_GOLDEN")) {
        std::ofstream(golden, std::ios::binary) << doc;
    }
    REQUIRE(std::filesystem::exists(golden));
    CHECK(doc == slurp(golden));
}

TEST_CASE("pattern file round trip")
{
    auto s = grid(3, 3);
    const auto p = layout(s.g, s.alpha, solved(s, 3, 0.5), Anchor{2, Point(1, -2), 0.3});
    const auto path = (std::filesystem::temp_directory_path() / "kiteflow_pattern.json").string();
    save_pattern(path, p);
    const auto q = load_pattern(path);
    REQUIRE(q.center.size() == p.center.size());
    for (std::size_t v = 0; v < p.center.size(); ++v)
        CHECK(q.center[v] == p.center[v]);
    for (std::size_t b = 0; b < p.black.size(); ++b)
        CHECK(q.black[b] == p.black[b]);
    CHECK(q.radius == p.radius);
    CHECK(q.anchor.root == 2);
    CHECK(closure_residual(q, s.g, s.alpha).max_residual <= 1e-8 * pattern_diameter(q));
    std::filesystem::remove(path);
}
