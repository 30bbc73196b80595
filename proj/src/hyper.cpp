#include "kiteflow/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseCholesky>

#include "kiteflow/error.hpp"
#include "kiteflow/kernel.hpp"

namespace kiteflow
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRhoCeiling = -1e-12;

void validate(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a)
{
    if (a.value.size() != g.num_vertices || static_cast<int>(a.kind.size()) != g.num_vertices)
        throw Error(ErrorKind::InvalidArgument, "assignment must cover every white vertex");
    if (alpha.alpha.size() != g.num_edges())
        throw Error(ErrorKind::InvalidArgument, "labelling size does not match the graph");
    for (int v = 0; v < g.num_vertices; ++v) {
        const double x = a.value[v];
        const std::string who = "white vertex " + std::to_string(g.white_ids[v]);
        if (!g.is_boundary(v) && a.kind[v] != HypKind::Interior)
            throw Error(ErrorKind::InvalidArgument, who + " is interior");
        if (g.is_boundary(v) && a.kind[v] == HypKind::Interior)
            throw Error(ErrorKind::InvalidArgument, who + " is a boundary vertex");
        if (a.kind[v] == HypKind::Beta) {
            if (!(x >= 0.0 && x < std::numbers::pi))
                throw Error(ErrorKind::DomainError, who + ": beta outside [0, pi)");
        } else if (!(std::isfinite(x) && x < 0.0)) {
            throw Error(ErrorKind::DomainError, who + ": rho must be negative");
        }
    }
}

double edge_term(double a, double x, double y)
{
    return big_F_theta(a, x - y) + big_F_theta(a, y - x) + big_F_theta(a, x + y) +
           big_F_theta(a, -x - y);
}

double value_impl(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a)
{
    double s = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) {
        const int u = g.edges[e].v0, v = g.edges[e].v1;
        const double th = alpha.alpha[e];
        const bool bu = a.kind[u] == HypKind::Beta, bv = a.kind[v] == HypKind::Beta;
        if (!bu && !bv)
            s += edge_term(th, a.value[u], a.value[v]);
        else if (bu && a.kind[v] == HypKind::Interior)
            s += big_F_beta_theta(a.value[u], th, a.value[v]);
        else if (bv && a.kind[u] == HypKind::Interior)
            s += big_F_beta_theta(a.value[v], th, a.value[u]);
    }
    for (int v : g.interior_vertices)
        s += kTwoPi * a.value[v];
    return s;
}

Eigen::VectorXd grad_impl(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a)
{
    Eigen::VectorXd grad(static_cast<Eigen::Index>(g.interior_vertices.size()));
    for (std::size_t i = 0; i < g.interior_vertices.size(); ++i) {
        const int v0 = g.interior_vertices[i];
        const double r0 = a.value[v0];
        double sum = 0.0;
        for (const auto& inc : g.incident[v0]) {
            const double th = alpha.alpha[inc.edge];
            const double x = a.value[inc.neighbor];
            if (a.kind[inc.neighbor] == HypKind::Beta)
                sum += phi_gen(th, r0, x);
            else
                sum += f_theta(th, x - r0) - f_theta(th, x + r0);
        }
        grad[static_cast<Eigen::Index>(i)] = kTwoPi - 2.0 * sum;
    }
    return grad;
}

Eigen::SparseMatrix<double> hess_impl(const WhiteGraph& g, const Labelling& alpha,
                                      const HypRadiusAssignment& a)
{
    const auto n = static_cast<Eigen::Index>(g.interior_vertices.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int v0 = g.interior_vertices[i];
        const double r0 = a.value[v0];
        double diag = 0.0;
        for (const auto& inc : g.incident[v0]) {
            const double th = alpha.alpha[inc.edge];
            const double x = a.value[inc.neighbor];
            if (a.kind[inc.neighbor] == HypKind::Beta) {
                diag += big_F_beta_theta_dxx(x, th, r0);
                continue;
            }
            const double d = f_theta_prime(th, x - r0), s = f_theta_prime(th, x + r0);
            diag += 2.0 * (d + s);
            const int j = g.interior_index[inc.neighbor];
            if (j >= 0)
                trip.emplace_back(i, j, -2.0 * (d - s));
        }
        trip.emplace_back(i, i, diag);
    }
    Eigen::SparseMatrix<double> h(n, n);
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

HypSolution newton(const WhiteGraph& g, const Labelling& alpha, HypRadiusAssignment a,
                   const HypSolveOptions& opts)
{
    const auto n = static_cast<Eigen::Index>(g.interior_vertices.size());
    double mean = 0.0;
    int count = 0;
    for (int v : g.boundary_vertices)
        if (a.kind[v] == HypKind::Boundary) {
            mean += a.value[v];
            ++count;
        }
    mean = count ? mean / count : -1.0;
    if (opts.initial_rho && opts.initial_rho->size() != n)
        throw Error(ErrorKind::InvalidArgument, "initial guess must cover every interior vertex");
    for (Eigen::Index i = 0; i < n; ++i)
        a.value[g.interior_vertices[i]] = opts.initial_rho ? (*opts.initial_rho)[i] : mean;
    validate(g, alpha, a);

    HypSolution sol;
    HypSolveReport& rep = sol.report;
    auto set_interior = [&](HypRadiusAssignment& dst, const Eigen::VectorXd& x) {
        for (Eigen::Index i = 0; i < n; ++i)
            dst.value[g.interior_vertices[i]] = x[i];
    };
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = a.value[g.interior_vertices[i]];

    double value = value_impl(g, alpha, a);
    Eigen::VectorXd grad = grad_impl(g, alpha, a);
    rep.gradient_norm = n ? grad.lpNorm<Eigen::Infinity>() : 0.0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    while (rep.gradient_norm > opts.tol) {
        if (rep.iterations >= opts.max_iter)
            throw Error(ErrorKind::NoConvergence,
                        "hyperbolic solve: no convergence after " + std::to_string(rep.iterations) +
                            " iterations, gradient " + std::to_string(rep.gradient_norm));
        ldlt.compute(hess_impl(g, alpha, a));
        if (ldlt.info() != Eigen::Success)
            throw Error(ErrorKind::NoConvergence, "hyperbolic solve: Hessian factorization failed");
        Eigen::VectorXd step = -ldlt.solve(grad);
        const double slope = grad.dot(step);
        if (!(slope < 0.0))
            step = -grad;
        const double longest = step.lpNorm<Eigen::Infinity>();
        if (longest > opts.max_step)
            step *= opts.max_step / longest;

        double t = 1.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (step[i] > 0.0)
                t = std::min(t, 0.99 * (kRhoCeiling - x[i]) / step[i]);
        if (!(t > 1e-14))
            throw Error(ErrorKind::DomainViolation,
                        "hyperbolic solve: iterate driven to rho >= 0 at iteration " +
                            std::to_string(rep.iterations));

        const double gnorm = grad.norm();
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
            const Eigen::VectorXd trial_x = x + t * step;
            HypRadiusAssignment trial = a;
            set_interior(trial, trial_x);
            const double trial_value = value_impl(g, alpha, trial);
            const bool armijo = trial_value <= value + 1e-4 * t * grad.dot(step);
            const bool flat = std::abs(trial_value - value) <= 1e-12 * (1.0 + std::abs(value));
            if (armijo || flat) {
                Eigen::VectorXd trial_grad = grad_impl(g, alpha, trial);
                if (armijo || trial_grad.norm() < gnorm) {
                    x = trial_x;
                    a = std::move(trial);
                    value = trial_value;
                    grad = std::move(trial_grad);
                    accepted = true;
                    break;
                }
            }
        }
        ++rep.iterations;
        if (!accepted)
            throw Error(ErrorKind::NoConvergence,
                        "hyperbolic solve: line search failed at iteration " +
                            std::to_string(rep.iterations));
        rep.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    }
    rep.converged = true;
    rep.value = value;
    rep.convex_certificate = convexity_certificate(g, alpha, a);
    sol.rho = std::move(a);
    return sol;
}

}  // namespace

std::string to_string(HypKind kind)
{
    switch (kind) {
    case HypKind::Interior: return "int";
    case HypKind::Boundary: return "bnd";
    case HypKind::Beta: return "beta";
    }
    return "int";
}

HypKind hyp_kind_from_string(const std::string& s)
{
    if (s == "int")
        return HypKind::Interior;
    if (s == "bnd")
        return HypKind::Boundary;
    if (s == "beta")
        return HypKind::Beta;
    throw Error(ErrorKind::ParseError, "unknown vertex kind '" + s + "'");
}

HypRadiusAssignment HypRadiusAssignment::ordinary(const WhiteGraph& g, const Eigen::VectorXd& rho)
{
    HypRadiusAssignment a;
    a.value = rho;
    a.kind.resize(g.num_vertices);
    for (int v = 0; v < g.num_vertices; ++v)
        a.kind[v] = g.is_boundary(v) ? HypKind::Boundary : HypKind::Interior;
    return a;
}

double s_hyp(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& rho)
{
    return s_hyp_gen(g, alpha, HypRadiusAssignment::ordinary(g, rho));
}

Eigen::VectorXd grad_s_hyp(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& rho)
{
    return grad_s_hyp_gen(g, alpha, HypRadiusAssignment::ordinary(g, rho));
}

Eigen::SparseMatrix<double> hess_s_hyp(const WhiteGraph& g, const Labelling& alpha,
                                       const Eigen::VectorXd& rho)
{
    return hess_s_hyp_gen(g, alpha, HypRadiusAssignment::ordinary(g, rho));
}

double s_hyp_gen(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a)
{
    validate(g, alpha, a);
    return value_impl(g, alpha, a);
}

Eigen::VectorXd grad_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                               const HypRadiusAssignment& a)
{
    validate(g, alpha, a);
    return grad_impl(g, alpha, a);
}

Eigen::SparseMatrix<double> hess_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                                           const HypRadiusAssignment& a)
{
    validate(g, alpha, a);
    return hess_impl(g, alpha, a);
}

bool convexity_certificate(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a)
{
    for (int e = 0; e < g.num_edges(); ++e) {
        const int u = g.edges[e].v0, v = g.edges[e].v1;
        for (auto [b, o] : {std::pair{u, v}, std::pair{v, u}})
            if (a.kind[b] == HypKind::Beta && a.kind[o] == HypKind::Interior &&
                !(std::cos(alpha.alpha[e]) < std::cos(a.value[b])))
                return false;
    }
    return true;
}

HypFunctionalReport evaluate_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                                       const HypRadiusAssignment& a)
{
    validate(g, alpha, a);
    return {value_impl(g, alpha, a), grad_impl(g, alpha, a), convexity_certificate(g, alpha, a)};
}

HypSolution minimize_s_hyp(const WhiteGraph& g, const Labelling& alpha,
                           const Eigen::VectorXd& boundary_rho, const HypSolveOptions& opts)
{
    if (boundary_rho.size() != static_cast<Eigen::Index>(g.boundary_vertices.size()))
        throw Error(ErrorKind::InvalidArgument, "boundary data must cover every boundary vertex");
    Eigen::VectorXd rho = Eigen::VectorXd::Constant(g.num_vertices, -1.0);
    for (std::size_t k = 0; k < g.boundary_vertices.size(); ++k)
        rho[g.boundary_vertices[k]] = boundary_rho[static_cast<Eigen::Index>(k)];
    return newton(g, alpha, HypRadiusAssignment::ordinary(g, rho), opts);
}

HypSolution minimize_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                               const HypRadiusAssignment& boundary, const HypSolveOptions& opts)
{
    HypRadiusAssignment a = boundary;
    for (int v : g.interior_vertices)
        a.value[v] = -1.0;
    validate(g, alpha, a);
    if (!convexity_certificate(g, alpha, a))
        throw Error(ErrorKind::DomainError,
                    "generalized functional is not certified convex (cos alpha >= cos beta on an edge)");
    return newton(g, alpha, std::move(a), opts);
}

HypMaxPrincipleReport check_max_principle_hyp(const WhiteGraph& g, const Labelling& alpha,
                                              const HypRadiusAssignment& rho,
                                              const HypRadiusAssignment& rho_star)
{
    constexpr double critical_tol = 1e-6;
    for (const auto* a : {&rho, &rho_star}) {
        const Eigen::VectorXd grad = grad_s_hyp_gen(g, alpha, *a);
        if (grad.size() && grad.lpNorm<Eigen::Infinity>() > critical_tol)
            throw Error(ErrorKind::NotASolution, "assignment is not a critical point");
    }
    for (int v = 0; v < g.num_vertices; ++v)
        if (rho.kind[v] == HypKind::Beta)
            throw Error(ErrorKind::InvalidArgument, "the reference pattern must lie inside the disc");

    HypMaxPrincipleReport rep;
    for (int v : g.boundary_vertices)
        if (rho_star.kind[v] != HypKind::Beta && rho_star.value[v] < rho.value[v])
            rep.hypothesis = false;
    rep.min_interior_gap = std::numeric_limits<double>::infinity();
    for (int v : g.interior_vertices) {
        const double gap = rho_star.value[v] - rho.value[v];
        rep.min_interior_gap = std::min(rep.min_interior_gap, gap);
        if (gap < -1e-12) {
            rep.conclusion = false;
            rep.witness.push_back(v);
        }
    }
    if (g.interior_vertices.empty())
        rep.min_interior_gap = 0.0;
    rep.holds = !rep.hypothesis || rep.conclusion;
    return rep;
}

double rho_from_hyp_radius(double r)
{
    if (!(r > 0.0))
        throw Error(ErrorKind::DomainError, "hyperbolic radius must be positive");
    return std::log(std::tanh(0.5 * r));
}

double hyp_radius_from_rho(double rho)
{
    if (!(rho < 0.0))
        throw Error(ErrorKind::DomainError, "rho must be negative");
    return 2.0 * std::atanh(std::exp(rho));
}

}  // namespace kiteflow
