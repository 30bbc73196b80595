#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "kiteflow/dcmap.hpp"
#include "kiteflow/error.hpp"
#include "kiteflow/euclid.hpp"
#include "kiteflow/kernel.hpp"

using namespace kiteflow;
using std::numbers::pi;

namespace
{

struct Instance {
    GridComplex gc;
    Labelling alpha;
    WhiteGraph g;
};

/// n x n cells with alpha = pi/2 + (-1)^j t_i, admissible for any t.
Instance labelled_grid(int n, std::mt19937_64& rng, double amp)
{
    std::vector<Eigen::Vector2i> cells;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            cells.emplace_back(i, j);
    Instance s{grid_complex(cells), {}, {}};
    std::uniform_real_distribution<double> u(-amp, amp);
    std::vector<double> t(n);
    for (auto& x : t)
        x = u(rng);
    s.alpha.alpha.resize(s.gc.graph.num_quads());
    for (int q = 0; q < s.gc.graph.num_quads(); ++q) {
        Eigen::Vector2i lo = s.gc.lattice[s.gc.graph.quad(q)[0]];
        for (int id : s.gc.graph.quad(q))
            lo = lo.cwiseMin(s.gc.lattice[id]);
        s.alpha.alpha[q] = pi / 2 + (lo.y() % 2 ? -1.0 : 1.0) * t[lo.x()];
    }
    s.g = derive_white_graph(s.gc.graph);
    return s;
}

Eigen::VectorXd solve(const Instance& s, std::mt19937_64& rng, double amp)
{
    std::uniform_real_distribution<double> u(-amp, amp);
    Eigen::VectorXd b(static_cast<Eigen::Index>(s.g.boundary_vertices.size()));
    for (Eigen::Index k = 0; k < b.size(); ++k)
        b[k] = std::exp(u(rng));
    return solve_dirichlet(s.g, s.alpha, b).r;
}

bool all_convex(const Instance& s, const Eigen::VectorXd& r)
{
    for (std::size_t e = 0; e < s.g.edges.size(); ++e)
        if (!kite(s.alpha.alpha[static_cast<Eigen::Index>(e)], r[s.g.edges[e].v0], r[s.g.edges[e].v1]).convex)
            return false;
    return true;
}

std::vector<Point> samples(const DiscreteConformalMap& m, std::mt19937_64& rng, int count)
{
    std::uniform_int_distribution<int> pick(0, m.num_triangles() - 1);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> out;
    for (int k = 0; k < count; ++k) {
        const auto& t = m.source_triangle(pick(rng));
        double a = u(rng), b = u(rng);
        if (a + b > 1) {
            a = 1 - a;
            b = 1 - b;
        }
        out.push_back(t[0] + a * (t[1] - t[0]) + b * (t[2] - t[0]));
    }
    return out;
}

}  // namespace

TEST_CASE("identity and similarity maps")
{
    std::mt19937_64 rng(21);
    const auto s = labelled_grid(6, rng, 0.3);
    const Eigen::VectorXd r = solve(s, rng, 0.4);
    const auto p = layout(s.g, s.alpha, r);
    const auto id = build_map(s.g, s.alpha, kites(p, s.g), s.alpha, kites(p, s.g));
    for (const auto& z : samples(id, rng, 100))
        CHECK((id.eval(z) - z).norm() < 1e-12);
    const auto did = dilatation(id);
    CHECK(std::abs(did.max - 1) < 1e-9);
    CHECK(sup_error(id, [](const Point& z) { return z; }, samples(id, rng, 50)) < 1e-12);

    const std::complex<double> a(0.7, -1.9), b(3.0, 0.5);
    const auto q = transform(p, a, b);
    const auto sim = build_map(s.g, s.alpha, kites(p, s.g), s.alpha, kites(q, s.g));
    auto ref = [&](const Point& z) {
        const auto w = a * std::complex<double>(z.x(), z.y()) + b;
        return Point(w.real(), w.imag());
    };
    for (const auto& z : samples(sim, rng, 100))
        CHECK((sim.eval(z) - ref(z)).norm() < 1e-10);
    CHECK(sup_error(sim, ref, samples(sim, rng, 100)) <= 1e-10);
    const auto ds = dilatation(sim);
    CHECK((ds.K.array() - 1).abs().maxCoeff() < 1e-9);
}

TEST_CASE("stretch has dilatation two")
{
    auto [d, alpha] = generate_square_grid(5, 5, pi / 2);
    const WhiteGraph g = derive_white_graph(d);
    const auto p = layout(g, alpha, Eigen::VectorXd::Ones(g.num_vertices));
    const auto src = kites(p, g);
    auto tgt = src;
    for (auto& k : tgt.kites)
        for (auto& q : k)
            q.x() *= 2;
    const auto m = build_map(g, alpha, src, alpha, tgt);
    const auto rep = dilatation(m);
    CHECK((rep.K.array() - 2).abs().maxCoeff() < 1e-9);
}

TEST_CASE("vertices, barycenters and continuity")
{
    std::mt19937_64 rng(22);
    const auto s = labelled_grid(5, rng, 0.3);
    const auto p = layout(s.g, s.alpha, solve(s, rng, 0.3));
    const auto q = layout(s.g, s.alpha, solve(s, rng, 0.5), Anchor{3, Point(1, 2), 0.4});
    const auto m = build_map(s.g, s.alpha, kites(p, s.g), s.alpha, kites(q, s.g));
    for (int v = 0; v < s.g.num_vertices; ++v)
        CHECK((m.eval(p.center[v]) - q.center[v]).norm() < 1e-12);
    for (int b = 0; b < s.g.num_black; ++b)
        CHECK((m.eval(p.black[b]) - q.black[b]).norm() < 1e-12);

    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& S = m.source_triangle(t);
        const auto& T = m.target_triangle(t);
        const Point z = (S[0] + S[1] + S[2]) / 3;
        CHECK((m.affine(t)(z) - (T[0] + T[1] + T[2]) / 3).norm() < 1e-12);
        // every triangle sharing a side agrees at its midpoint
        for (int k = 0; k < 3; ++k) {
            const Point a = S[k], b = S[(k + 1) % 3];
            const Point mid = 0.5 * (a + b);
            for (int u = 0; u < m.num_triangles(); ++u) {
                const auto& U = m.source_triangle(u);
                const bool has_a = U[0] == a || U[1] == a || U[2] == a;
                const bool has_b = U[0] == b || U[1] == b || U[2] == b;
                if (has_a && has_b)
                    REQUIRE((m.affine(u)(mid) - m.affine(t)(mid)).norm() < 1e-9);
            }
        }
    }

    // kite barycenter against direct barycentric arithmetic
    const auto K = kites(p, s.g).kites[7];
    const Point z = (K[0] + K[1] + K[2] + K[3]) / 4;
    const int t = m.locate(z);
    REQUIRE(t >= 0);
    const auto& S = m.source_triangle(t);
    const auto& T = m.target_triangle(t);
    Eigen::Matrix2d P;
    P << S[1] - S[0], S[2] - S[0];
    const Eigen::Vector2d lam = P.inverse() * (z - S[0]);
    CHECK((m.eval(z) - (T[0] + lam[0] * (T[1] - T[0]) + lam[1] * (T[2] - T[0]))).norm() < 1e-12);
}

TEST_CASE("inverse map and orthogonal singular values")
{
    std::mt19937_64 rng(23);
    auto [d, alpha] = generate_square_grid(8, 8, pi / 2);
    const WhiteGraph g = derive_white_graph(d);
    Instance s{{d, {}}, alpha, g};
    const Eigen::VectorXd r = Eigen::VectorXd::Ones(g.num_vertices);
    const Eigen::VectorXd rt = solve(s, rng, 0.5);
    const auto p = layout(g, alpha, r);
    const auto q = layout(g, alpha, rt);
    const auto fwd = build_map(g, alpha, kites(p, g), alpha, kites(q, g));
    const auto inv = build_map(g, alpha, kites(q, g), alpha, kites(p, g));
    for (const auto& z : samples(fwd, rng, 200))
        CHECK((inv.eval(fwd.eval(z)) - z).norm() < 1e-9);

    const Eigen::VectorXd u = ratio_function(r, rt);
    const auto rep = dilatation(fwd);
    for (int e = 0; e < g.num_edges(); ++e) {
        const double hi = std::max(u[g.edges[e].v0], u[g.edges[e].v1]);
        const double lo = std::min(u[g.edges[e].v0], u[g.edges[e].v1]);
        for (int t : {2 * e, 2 * e + 1}) {
            REQUIRE(std::abs(rep.sigma(t, 0) - hi) < 1e-9);
            REQUIRE(std::abs(rep.sigma(t, 1) - lo) < 1e-9);
        }
    }
}

TEST_CASE("ratio function")
{
    const Eigen::Vector3d r(1, 2, 3);
    CHECK((ratio_function(r, r).array() - 1).abs().maxCoeff() == 0);
    CHECK((ratio_function(r, 2.5 * r).array() - 2.5).abs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(ratio_function(r, Eigen::Vector2d(1, 1)), Error);
}

TEST_CASE("subharmonicity of u and 1/u on convex-kite pairs")
{
    std::mt19937_64 rng(24);
    int tested = 0;
    while (tested < 50) {
        const auto s = labelled_grid(6, rng, 0.35);
        const Eigen::VectorXd r = solve(s, rng, 0.4);
        const Eigen::VectorXd rt = solve(s, rng, 0.4);
        if (!all_convex(s, r) || !all_convex(s, rt))
            continue;
        ++tested;
        const auto rep = subharmonicity(s.g, s.alpha, r, rt);
        REQUIRE(rep.min_laplacian_u >= -1e-9);
        REQUIRE(rep.min_laplacian_inv_u >= -1e-9);

        // extrema of u on the boundary
        const Eigen::VectorXd u = ratio_function(r, rt);
        double bmax = 0, bmin = 1e300, imax = 0, imin = 1e300;
        for (int v = 0; v < s.g.num_vertices; ++v) {
            (s.g.is_boundary(v) ? bmax : imax) = std::max(s.g.is_boundary(v) ? bmax : imax, u[v]);
            (s.g.is_boundary(v) ? bmin : imin) = std::min(s.g.is_boundary(v) ? bmin : imin, u[v]);
        }
        REQUIRE(imax <= bmax + 1e-12);
        REQUIRE(imin >= bmin - 1e-12);
    }
}

TEST_CASE("map errors")
{
    std::mt19937_64 rng(25);
    const auto s = labelled_grid(3, rng, 0.2);
    const auto p = layout(s.g, s.alpha, solve(s, rng, 0.2));
    const auto k = kites(p, s.g);
    const auto m = build_map(s.g, s.alpha, k, s.alpha, k);
    try {
        m.eval(Point(1e3, 1e3));
        FAIL("expected OutsideDomain");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutsideDomain);
    }
    // within the snap tolerance of a corner
    const Point corner = k.kites[0][0];
    CHECK((m.eval(corner + Point(1e-12, -1e-12)) - corner).norm() < 1e-9);

    auto fewer = k;
    fewer.kites.pop_back();
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of([&] { build_map(s.g, s.alpha, k, s.alpha, fewer); }) == ErrorKind::CombinatoricsMismatch);
    Labelling other = s.alpha;
    other.alpha[0] += 0.01;
    CHECK(kind_of([&] { build_map(s.g, s.alpha, k, other, k); }) == ErrorKind::AngleMismatch);
    auto overlapped = k;
    for (auto& q : overlapped.kites.back())
        q += k.kites[0][0] - k.kites.back()[0] + Point(0.05, 0.02);
    CHECK(kind_of([&] { build_map(s.g, s.alpha, k, s.alpha, overlapped); }) == ErrorKind::NotEmbedded);
}
