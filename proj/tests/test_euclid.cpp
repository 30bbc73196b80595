#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kiteflow/error.hpp"
#include "kiteflow/euclid.hpp"

#include <Eigen/Eigenvalues>

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

Eigen::VectorXd random_boundary(const WhiteGraph& g, std::mt19937_64& rng, double amp)
{
    std::uniform_real_distribution<double> u(-amp, amp);
    Eigen::VectorXd b(static_cast<Eigen::Index>(g.boundary_vertices.size()));
    for (Eigen::Index k = 0; k < b.size(); ++k)
        b[k] = std::exp(u(rng));
    return b;
}

// root of 2 atan(1/t) + 2 atan(2/t) = pi by bisection
double bisection_oracle()
{
    double lo = 0.1, hi = 10;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double val = 2 * std::atan(1 / mid) + 2 * std::atan(2 / mid) - pi;
        (val > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("residual examples")
{
    auto s = grid(4, 4);
    Eigen::VectorXd r = Eigen::VectorXd::Ones(s.g.num_vertices);
    CHECK(residual(s.g, s.alpha, r).lpNorm<Eigen::Infinity>() < 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int v = 0; v < s.g.num_vertices; ++v)
        r[v] = std::exp(u(rng));
    const Eigen::VectorXd r0 = residual(s.g, s.alpha, r);
    CHECK((residual(s.g, s.alpha, 3.7 * r) - r0).lpNorm<Eigen::Infinity>() < 1e-14);

    auto one = grid(2, 2);
    REQUIRE(one.g.interior_vertices.size() == 1);
    Eigen::VectorXd rr(5);
    const int c = one.g.interior_vertices[0];
    const double bvals[4] = {1, 1, 2, 2};
    for (int k = 0; k < 4; ++k)
        rr[one.g.boundary_vertices[k]] = bvals[k];
    rr[c] = 1;
    CHECK(residual(one.g, one.alpha, rr)[0] ==
          doctest::Approx(2 * (std::atan(1.0) + std::atan(2.0)) - pi).epsilon(1e-14));
    CHECK(residual(one.g, one.alpha, rr)[0] == doctest::Approx(0.6435).epsilon(1e-4));

    rr[c] = -1;
    CHECK_THROWS_AS(residual(one.g, one.alpha, rr), Error);
    CHECK_THROWS_AS(residual(one.g, one.alpha, Eigen::VectorXd::Ones(3)), Error);
}

TEST_CASE("isoradial and closed-form solutions")
{
    auto s = grid(5, 5);
    const auto sol = solve_dirichlet(s.g, s.alpha, Eigen::VectorXd::Ones(s.g.boundary_vertices.size()));
    CHECK(sol.report.converged);
    CHECK((sol.r.array() - 1).abs().maxCoeff() < 1e-10);

    auto one = grid(2, 2);
    Eigen::VectorXd b(4);
    b << 1, 1, 2, 2;
    const auto s1 = solve_dirichlet(one.g, one.alpha, b);
    const double t = s1.r[one.g.interior_vertices[0]];
    CHECK(std::abs(t - std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(t - bisection_oracle()) < 1e-9);
}

TEST_CASE("scaling, uniqueness and monotonicity")
{
    auto s = grid(5, 5);
    std::mt19937_64 rng(2);
    const Eigen::VectorXd b = random_boundary(s.g, rng, 0.5);
    const auto base = solve_dirichlet(s.g, s.alpha, b);
    CHECK(base.report.residual <= 1e-10);

    const auto scaled = solve_dirichlet(s.g, s.alpha, 2.5 * b);
    CHECK((scaled.r - 2.5 * base.r).cwiseAbs().maxCoeff() / base.r.maxCoeff() < 1e-12);

    std::uniform_real_distribution<double> u(-3, 3);
    const auto n = static_cast<Eigen::Index>(s.g.interior_vertices.size());
    for (int k = 0; k < 10; ++k) {
        SolveOptions opts;
        opts.initial_rho = Eigen::VectorXd(n);
        for (Eigen::Index i = 0; i < n; ++i)
            (*opts.initial_rho)[i] = u(rng);
        const auto other = solve_dirichlet(s.g, s.alpha, b, opts);
        CHECK((other.r.array().log() - base.r.array().log()).abs().maxCoeff() < 1e-9);
    }

    for (Eigen::Index k = 0; k < b.size(); ++k) {
        Eigen::VectorXd raised = b;
        raised[k] *= 1.3;
        const auto up = solve_dirichlet(s.g, s.alpha, raised);
        for (int v : s.g.interior_vertices)
            REQUIRE(up.r[v] >= base.r[v] - 1e-12);
    }
}

TEST_CASE("jacobian symmetry and finite differences")
{
    auto s = grid(4, 5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::VectorXd r(s.g.num_vertices);
    for (int v = 0; v < s.g.num_vertices; ++v)
        r[v] = std::exp(u(rng));
    const Eigen::MatrixXd jac = Eigen::MatrixXd(residual_jacobian(s.g, s.alpha, r));
    CHECK((jac - jac.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
    CHECK(eig.eigenvalues().maxCoeff() < 0);
    const double h = 1e-6;
    for (std::size_t j = 0; j < s.g.interior_vertices.size(); ++j) {
        Eigen::VectorXd rp = r, rm = r;
        rp[s.g.interior_vertices[j]] *= std::exp(h);
        rm[s.g.interior_vertices[j]] *= std::exp(-h);
        const Eigen::VectorXd col = (residual(s.g, s.alpha, rp) - residual(s.g, s.alpha, rm)) / (2 * h);
        CHECK((col - jac.col(static_cast<Eigen::Index>(j))).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("maximum principle on random solved pairs")
{
    auto s = grid(6, 6);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 100; ++k) {
        const auto a = solve_dirichlet(s.g, s.alpha, random_boundary(s.g, rng, 0.7));
        const auto b = solve_dirichlet(s.g, s.alpha, random_boundary(s.g, rng, 0.7));
        const auto rep = check_max_principle(s.g, s.alpha, a.r, b.r);
        REQUIRE(rep.holds);
        REQUIRE(!rep.argmax.empty());
    }
    const auto a = solve_dirichlet(s.g, s.alpha, random_boundary(s.g, rng, 0.7));
    CHECK(check_max_principle(s.g, s.alpha, a.r, a.r).holds);
    CHECK(check_max_principle(s.g, s.alpha, a.r, 3.0 * a.r).holds);
    Eigen::VectorXd broken = a.r;
    broken[s.g.interior_vertices[0]] *= 1.1;
    CHECK_THROWS_AS(check_max_principle(s.g, s.alpha, a.r, broken), Error);
}

TEST_CASE("q bound")
{
    auto s = grid(4, 4);
    const auto iso = q_bound(s.g, s.alpha, Eigen::VectorXd::Ones(s.g.num_vertices));
    CHECK(iso.q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(iso.nonconvex_edges.empty());

    auto one = grid(1, 1);
    Eigen::VectorXd r(2);
    r << 1, 2;
    const auto rep = q_bound(one.g, one.alpha, r);
    CHECK(rep.ratio[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(rep.q == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("no convergence is reported")
{
    auto s = grid(4, 4);
    std::mt19937_64 rng(5);
    SolveOptions opts;
    opts.max_iter = 1;
    try {
        solve_dirichlet(s.g, s.alpha, random_boundary(s.g, rng, 1.0), opts);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoConvergence);
    }
    CHECK_THROWS_AS(solve_dirichlet(s.g, s.alpha, Eigen::VectorXd::Ones(2)), Error);
}
