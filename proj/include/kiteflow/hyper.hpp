#pragma once

// Hyperbolic circle patterns in the unit disc through the convex functional
// S_hyp in the variables rho = log tanh(r_hyp / 2), and its generalization to
// boundary circles crossing the unit circle at exterior angle beta.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kiteflow/bquad.hpp"

namespace kiteflow
{

enum class HypKind { Interior, Boundary, Beta };

std::string to_string(HypKind kind);
HypKind hyp_kind_from_string(const std::string& s);

/// Per white vertex: rho for Interior/Boundary entries, beta for Beta entries.
struct HypRadiusAssignment {
    Eigen::VectorXd value;
    std::vector<HypKind> kind;

    /// Interior vertices Interior, boundary vertices Boundary.
    static HypRadiusAssignment ordinary(const WhiteGraph& g, const Eigen::VectorXd& rho);
};

double s_hyp(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& rho);
/// Indexed by interior index.
Eigen::VectorXd grad_s_hyp(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& rho);
Eigen::SparseMatrix<double> hess_s_hyp(const WhiteGraph& g, const Labelling& alpha,
                                       const Eigen::VectorXd& rho);

double s_hyp_gen(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a);
Eigen::VectorXd grad_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                               const HypRadiusAssignment& a);
Eigen::SparseMatrix<double> hess_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                                           const HypRadiusAssignment& a);

/// cos(alpha(e)) < cos(beta(v)) on every edge from an interior vertex to a beta vertex.
bool convexity_certificate(const WhiteGraph& g, const Labelling& alpha, const HypRadiusAssignment& a);

struct HypFunctionalReport {
    double value = 0.0;
    Eigen::VectorXd gradient;
    bool convex_certificate = true;
};

HypFunctionalReport evaluate_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                                       const HypRadiusAssignment& a);

struct HypSolveOptions {
    double tol = 1e-8;
    int max_iter = 200;
    int max_halvings = 40;
    double max_step = 2.0;
    /// interior rho; defaults to the mean of the ordinary boundary rho
    std::optional<Eigen::VectorXd> initial_rho;
};

struct HypSolveReport {
    int iterations = 0;
    double gradient_norm = 0.0;  // infinity norm
    double value = 0.0;
    bool converged = false;
    bool convex_certificate = true;
};

struct HypSolution {
    HypRadiusAssignment rho;
    HypSolveReport report;
};

/// boundary_rho indexed by boundary index, all entries negative.
HypSolution minimize_s_hyp(const WhiteGraph& g, const Labelling& alpha,
                           const Eigen::VectorXd& boundary_rho, const HypSolveOptions& opts = {});

/// Boundary entries of `boundary` fix the data; interior entries are ignored
/// unless used as the initial guess. Refuses (DomainError) without the
/// convexity certificate.
HypSolution minimize_s_hyp_gen(const WhiteGraph& g, const Labelling& alpha,
                               const HypRadiusAssignment& boundary, const HypSolveOptions& opts = {});

struct HypMaxPrincipleReport {
    bool hypothesis = true;  // boundary domination
    bool conclusion = true;  // interior domination
    bool holds = true;       // hypothesis implies conclusion
    double min_interior_gap = 0.0;  // min over interior of rho_star - rho
    std::vector<int> witness;       // interior vertices violating the conclusion
};

/// rho is an ordinary pattern inside the disc; rho_star may carry beta vertices.
/// Throws NotASolution unless both gradients are at most 1e-6.
HypMaxPrincipleReport check_max_principle_hyp(const WhiteGraph& g, const Labelling& alpha,
                                              const HypRadiusAssignment& rho,
                                              const HypRadiusAssignment& rho_star);

/// rho = log tanh(r / 2) and back.
double rho_from_hyp_radius(double r);
double hyp_radius_from_rho(double rho);

}  // namespace kiteflow
