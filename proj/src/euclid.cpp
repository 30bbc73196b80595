#include "kiteflow/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>

#include "kiteflow/error.hpp"
#include "kiteflow/kernel.hpp"

namespace kiteflow
{

namespace
{

void require_radii(const WhiteGraph& g, const Eigen::VectorXd& r)
{
    if (r.size() != g.num_vertices)
        throw Error(ErrorKind::MissingRadius, "expected " + std::to_string(g.num_vertices) +
                                                  " radii, got " + std::to_string(r.size()));
    for (int v = 0; v < g.num_vertices; ++v)
        if (!(std::isfinite(r[v]) && r[v] > 0.0))
            throw Error(ErrorKind::MissingRadius,
                        "radius of white vertex " + std::to_string(g.white_ids[v]) +
                            " is missing or not positive");
}

Eigen::VectorXd residual_rho(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& rho)
{
    Eigen::VectorXd res(static_cast<Eigen::Index>(g.interior_vertices.size()));
    for (std::size_t i = 0; i < g.interior_vertices.size(); ++i) {
        const int v0 = g.interior_vertices[i];
        double sum = 0.0;
        for (const auto& inc : g.incident[v0])
            sum += f_theta(alpha.alpha[inc.edge], rho[inc.neighbor] - rho[v0]);
        res[static_cast<Eigen::Index>(i)] = sum - std::numbers::pi;
    }
    return res;
}

Eigen::SparseMatrix<double> jacobian_rho(const WhiteGraph& g, const Labelling& alpha,
                                         const Eigen::VectorXd& rho)
{
    const auto n = static_cast<Eigen::Index>(g.interior_vertices.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int v0 = g.interior_vertices[i];
        double diag = 0.0;
        for (const auto& inc : g.incident[v0]) {
            const double d = f_theta_prime(alpha.alpha[inc.edge], rho[inc.neighbor] - rho[v0]);
            diag -= d;
            const int j = g.interior_index[inc.neighbor];
            if (j >= 0)
                trip.emplace_back(i, j, d);
        }
        trip.emplace_back(i, i, diag);
    }
    Eigen::SparseMatrix<double> jac(n, n);
    jac.setFromTriplets(trip.begin(), trip.end());
    return jac;
}

}  // namespace

Eigen::VectorXd residual(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r)
{
    require_radii(g, r);
    return residual_rho(g, alpha, r.array().log().matrix());
}

Eigen::SparseMatrix<double> residual_jacobian(const WhiteGraph& g, const Labelling& alpha,
                                              const Eigen::VectorXd& r)
{
    require_radii(g, r);
    return jacobian_rho(g, alpha, r.array().log().matrix());
}

Eigen::VectorXd boundary_values(const WhiteGraph& g, const Eigen::VectorXd& values)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(g.boundary_vertices.size()));
    for (std::size_t k = 0; k < g.boundary_vertices.size(); ++k)
        out[static_cast<Eigen::Index>(k)] = values[g.boundary_vertices[k]];
    return out;
}

DirichletSolution solve_dirichlet(const WhiteGraph& g, const Labelling& alpha,
                                  const Eigen::VectorXd& boundary_r, const SolveOptions& opts)
{
    if (boundary_r.size() != static_cast<Eigen::Index>(g.boundary_vertices.size()))
        throw Error(ErrorKind::MissingRadius, "boundary data must cover every boundary vertex");
    if (alpha.alpha.size() != g.num_edges())
        throw Error(ErrorKind::InvalidArgument, "labelling size does not match the graph");

    Eigen::VectorXd rho(g.num_vertices);
    double mean = 0.0;
    for (std::size_t k = 0; k < g.boundary_vertices.size(); ++k) {
        const double rb = boundary_r[static_cast<Eigen::Index>(k)];
        if (!(std::isfinite(rb) && rb > 0.0))
            throw Error(ErrorKind::MissingRadius,
                        "boundary radius of white vertex " +
                            std::to_string(g.white_ids[g.boundary_vertices[k]]) + " is not positive");
        rho[g.boundary_vertices[k]] = std::log(rb);
        mean += std::log(rb);
    }
    if (!g.boundary_vertices.empty())
        mean /= static_cast<double>(g.boundary_vertices.size());
    const auto n = static_cast<Eigen::Index>(g.interior_vertices.size());
    if (opts.initial_rho && opts.initial_rho->size() != n)
        throw Error(ErrorKind::InvalidArgument, "initial guess must cover every interior vertex");
    for (Eigen::Index i = 0; i < n; ++i)
        rho[g.interior_vertices[i]] = opts.initial_rho ? (*opts.initial_rho)[i] : mean;

    DirichletSolution sol;
    SolveReport& rep = sol.report;
    Eigen::VectorXd res = residual_rho(g, alpha, rho);
    rep.residual = n ? res.lpNorm<Eigen::Infinity>() : 0.0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    while (rep.residual > opts.tol) {
        if (rep.iterations >= opts.max_iter)
            throw Error(ErrorKind::NoConvergence,
                        "Dirichlet solve: no convergence after " + std::to_string(rep.iterations) +
                            " iterations, residual " + std::to_string(rep.residual));
        const Eigen::SparseMatrix<double> neg_jac = -jacobian_rho(g, alpha, rho);
        ldlt.compute(neg_jac);
        if (ldlt.info() != Eigen::Success)
            throw Error(ErrorKind::SingularSystem, "Dirichlet solve: singular Jacobian");
        Eigen::VectorXd step = ldlt.solve(res);
        const double longest = step.lpNorm<Eigen::Infinity>();
        if (longest > opts.max_step)
            step *= opts.max_step / longest;

        const double norm0 = res.norm();
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
            Eigen::VectorXd trial = rho;
            for (Eigen::Index i = 0; i < n; ++i)
                trial[g.interior_vertices[i]] += t * step[i];
            Eigen::VectorXd trial_res = residual_rho(g, alpha, trial);
            if (trial_res.norm() < norm0) {
                rho = std::move(trial);
                res = std::move(trial_res);
                accepted = true;
                break;
            }
        }
        ++rep.iterations;
        rep.damping.push_back(accepted ? t : 0.0);
        if (!accepted) {
            rep.residual = res.lpNorm<Eigen::Infinity>();
            throw Error(ErrorKind::NoConvergence,
                        "Dirichlet solve: line search failed at iteration " +
                            std::to_string(rep.iterations) + ", residual " +
                            std::to_string(rep.residual));
        }
        rep.residual = res.lpNorm<Eigen::Infinity>();
    }
    rep.converged = true;
    rep.max_abs_rho = rho.cwiseAbs().maxCoeff();
    sol.r = rho.array().exp().matrix();
    return sol;
}

MaxPrincipleReport check_max_principle(const WhiteGraph& g, const Labelling& alpha,
                                       const Eigen::VectorXd& r, const Eigen::VectorXd& r_tilde)
{
    constexpr double solution_tol = 1e-8;
    for (const auto* rr : {&r, &r_tilde}) {
        const Eigen::VectorXd res = residual(g, alpha, *rr);
        if (res.size() && res.lpNorm<Eigen::Infinity>() > solution_tol)
            throw Error(ErrorKind::NotASolution, "radius function violates the angle-sum system");
    }
    const Eigen::VectorXd q = r.cwiseQuotient(r_tilde);
    MaxPrincipleReport rep;
    rep.max_ratio = q.maxCoeff();
    rep.min_ratio = q.minCoeff();
    const double tol = 1e-9 * std::max(1.0, rep.max_ratio);
    bool max_on_boundary = false, min_on_boundary = false;
    for (int v = 0; v < g.num_vertices; ++v) {
        if (q[v] >= rep.max_ratio - tol) {
            rep.argmax.push_back(v);
            max_on_boundary = max_on_boundary || g.is_boundary(v);
        }
        if (q[v] <= rep.min_ratio + tol) {
            rep.argmin.push_back(v);
            min_on_boundary = min_on_boundary || g.is_boundary(v);
        }
    }
    rep.holds = max_on_boundary && min_on_boundary;
    return rep;
}

QBoundReport q_bound(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r)
{
    require_radii(g, r);
    QBoundReport rep;
    rep.ratio.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto k = kite(alpha.alpha[e], r[g.edges[e].v0], r[g.edges[e].v1]);
        const double ratio = k.H / k.L;
        rep.ratio[e] = ratio;
        rep.q = std::max(rep.q, std::max(ratio, 1.0 / ratio));
        if (!k.convex)
            rep.nonconvex_edges.push_back(e);
    }
    return rep;
}

}  // namespace kiteflow
