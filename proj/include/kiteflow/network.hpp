#pragma once

// Electrical networks on the white graph: conductances, Laplacian, harmonic
// functions, effective resistance and vertex extremal length.

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kiteflow/bquad.hpp"
#include "kiteflow/layout.hpp"

namespace kiteflow
{

struct WeightedEdge {
    int u, v;
    double mu;
};

struct WeightedGraph {
    int num_vertices = 0;
    std::vector<WeightedEdge> edges;
    /// per vertex: (edge index) list
    std::vector<std::vector<int>> incident;
    /// optional; empty means no vertex is marked
    std::vector<char> boundary;

    int other(int e, int v) const { return edges[e].u == v ? edges[e].v : edges[e].u; }
};

/// Throws InvalidArgument for out-of-range ends, loops or non-positive conductances.
WeightedGraph make_weighted_graph(int num_vertices, std::vector<WeightedEdge> edges);

/// mu(e) = 2 f'_alpha(log r1 - log r0) on the white graph; boundary flags copied.
WeightedGraph conductances_from_pattern(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r);

/// (Delta h)(v) = sum over edges of mu (h(w) - h(v)), at every vertex.
Eigen::VectorXd laplacian(const WeightedGraph& wg, const Eigen::VectorXd& h);
Eigen::SparseMatrix<double> laplacian_matrix(const WeightedGraph& wg);

double dirichlet_energy(const WeightedGraph& wg, const Eigen::VectorXd& h);

/// Harmonic extension of values prescribed on `fixed`. Throws SingularSystem
/// when some component carries no prescribed vertex.
Eigen::VectorXd solve_harmonic(const WeightedGraph& wg, const std::vector<int>& fixed,
                               const Eigen::VectorXd& values);
/// Uses the boundary flags.
Eigen::VectorXd solve_harmonic(const WeightedGraph& wg, const Eigen::VectorXd& boundary_values_per_vertex);

/// +inf when A and Z lie in different components.
double effective_resistance(const WeightedGraph& wg, const std::vector<int>& A, const std::vector<int>& Z);

struct VelOptions {
    double tol = 1e-9;
    int max_rounds = 10000;
};

struct VelResult {
    double mod = 0.0;
    double vel = 0.0;
    Eigen::VectorXd eta;
    int rounds = 0;
    int constraints = 0;
    /// smallest eta-length of a V1 -> V2 path
    double min_path_length = 0.0;
};

/// Vertex modulus of the family of V1 -> V2 paths. Conductances are ignored.
VelResult vel(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2,
              const VelOptions& opts = {});

/// Minimal eta-length of a V1 -> V2 path, endpoints included; the path is returned.
double shortest_vertex_path(const WeightedGraph& wg, const Eigen::VectorXd& eta, const std::vector<int>& V1,
                            const std::vector<int>& V2, std::vector<int>* path = nullptr);

/// min sum eta^2 subject to sum over each set of eta >= 1.
Eigen::VectorXd modulus_of_sets(int num_vertices, const std::vector<std::vector<int>>& sets);

struct DualityReport {
    bool degenerate = false;
    double mod_paths = 0.0;      // by enumeration of simple paths
    double mod_separating = 0.0;  // by enumeration of separating sets
    double product = 0.0;
    int num_paths = 0, num_separating = 0;
};

inline constexpr int kDualityMaxVertices = 15;

/// Brute force; throws TooLarge above kDualityMaxVertices.
DualityReport vel_duality_check(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2);

/// True iff every V1 -> V3 path meets V2.
bool separates(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2,
               const std::vector<int>& V3);

struct VelReffReport {
    double vel = 0.0, reff = 0.0, C4 = 0.0;
    bool holds = false;
};

VelReffReport vel_reff_bound(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2);

struct ConductanceSumReport {
    Eigen::VectorXd per_vertex;
    double max = 0.0;
    int argmax = -1;
    bool finite = true;
};

ConductanceSumReport conductance_sum_report(const WeightedGraph& wg);

/// Effective resistance from v0 to the vertices whose centers lie at distance
/// >= R from center(v0), for each R; +inf once no vertex is that far.
std::vector<double> annuli_resistance_profile(const WeightedGraph& wg, const CirclePattern& p, int v0,
                                              const std::vector<double>& radii);

struct Constants {
    double C0, C2, C6;
};

/// C0 = 1/sin(alpha0), C2 = 1/(48 C0^2 N + 16 C1^2 pi^2), C6 = 9/(4 C2).
Constants network_constants(double alpha0, double N, double C1);

}  // namespace kiteflow
