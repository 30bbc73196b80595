#pragma once

// Euclidean Dirichlet problem for radius functions.

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kiteflow/bquad.hpp"

namespace kiteflow
{

/// Angle-sum defect per interior vertex (indexed by interior index).
/// r holds one positive radius per white vertex.
Eigen::VectorXd residual(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r);

/// d residual / d rho on the interior, rho = log r.
Eigen::SparseMatrix<double> residual_jacobian(const WhiteGraph& g, const Labelling& alpha,
                                              const Eigen::VectorXd& r);

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 100;
    int max_halvings = 30;
    /// Newton steps longer than this (infinity norm, log-radius units) are shortened
    double max_step = 2.0;
    /// log-radii per interior vertex; defaults to the mean boundary log-radius
    std::optional<Eigen::VectorXd> initial_rho;
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;  // infinity norm
    std::vector<double> damping;
    bool converged = false;
    double max_abs_rho = 0.0;
};

struct DirichletSolution {
    Eigen::VectorXd r;  // per white vertex
    SolveReport report;
};

/// boundary_r is indexed by boundary index (WhiteGraph::boundary_vertices).
/// Throws NoConvergence; the message carries the last residual.
DirichletSolution solve_dirichlet(const WhiteGraph& g, const Labelling& alpha,
                                  const Eigen::VectorXd& boundary_r, const SolveOptions& opts = {});

/// Boundary entries of a per-white-vertex vector, in boundary index order.
Eigen::VectorXd boundary_values(const WhiteGraph& g, const Eigen::VectorXd& values);

struct MaxPrincipleReport {
    bool holds = true;
    double max_ratio = 0.0, min_ratio = 0.0;
    std::vector<int> argmax, argmin;  // white indices attaining the extremes
};

/// Extremes of r / r_tilde sit on the boundary. Throws NotASolution unless both
/// radius functions have residual <= 1e-8.
MaxPrincipleReport check_max_principle(const WhiteGraph& g, const Labelling& alpha,
                                       const Eigen::VectorXd& r, const Eigen::VectorXd& r_tilde);

struct QBoundReport {
    double q = 1.0;
    Eigen::VectorXd ratio;            // H/L per edge
    std::vector<int> nonconvex_edges;
};

QBoundReport q_bound(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r);

}  // namespace kiteflow
