#pragma once

// End-to-end experiments: convergence of discrete conformal maps under
// refinement, and the rigidity interpolation family on finite truncations.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kiteflow/bquad.hpp"
#include "kiteflow/dcmap.hpp"
#include "kiteflow/io.hpp"
#include "kiteflow/layout.hpp"

namespace kiteflow
{

using cplx = std::complex<double>;

enum class DomainKind { Square, Disc };

/// Unit square [0,1]^2 or unit disc about 0, translated by shift.
struct Domain {
    DomainKind kind = DomainKind::Disc;
    cplx shift = 0.0;

    bool contains(const Point& z) const;
    /// Distance to the boundary, negative outside.
    double depth(const Point& z) const;
    Point center() const;
};

enum class MapKind { Identity, Similarity, Moebius, Square };

/// identity | similarity(a, b): a z + b | moebius(a): (z - a)/(1 - conj(a) z) | square: z^2
struct ReferenceMap {
    MapKind kind = MapKind::Identity;
    cplx a = 1.0, b = 0.0;

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
    std::string name() const;
};

/// "identity", "similarity:ar,ai,br,bi", "moebius:a" or "moebius:ar,ai", "square".
ReferenceMap parse_reference_map(const std::string& text);
Domain parse_domain(const std::string& kind, cplx shift = 0.0);

struct ConvergenceSpec {
    Domain domain;
    ReferenceMap map;
    std::vector<int> levels{8, 16, 32};
    double margin = 0.2;
    double q_max = 10.0;
    std::uint64_t seed = 1;
};

/// Throws InvalidArgument when the spec is inconsistent.
void validate(const ConvergenceSpec& spec);

struct LevelReport {
    int n = 0;
    double h = 0.0;
    int num_white = 0, num_quads = 0;
    double source_max_diameter = 0.0;
    double delta = 0.0;               // twice the source maximum diameter
    double target_max_diameter = 0.0;  // delta tilde
    double q = 1.0;
    double max_dilatation = 1.0;
    double max_dilatation_compact = 1.0;
    double sup_error = 0.0;
    double preimage_margin = 0.0;
    double uncovered_distance = 0.0;  // largest distance from the domain boundary to the kites
    double u_min = 1.0, u_max = 1.0;
    int solver_iterations = 0;
    double solver_residual = 0.0;
    // hypothesis checks
    bool radii_below_half_delta = false;
    bool kites_within_delta = false;
    bool kites_convex = false;
    bool q_bounded = false;
    bool embedded = false;
};

struct ConvergenceReport {
    ConvergenceSpec spec;
    std::vector<LevelReport> levels;
};

/// Everything built for one refinement level.
struct LevelArtifacts {
    GridComplex complex;
    WhiteGraph g;
    Labelling alpha;
    Eigen::VectorXd r_source, r_target;
    CirclePattern source, target;
    DiscreteConformalMap map, inverse;
};

LevelArtifacts build_level(const ConvergenceSpec& spec, int n, LevelReport* report = nullptr);

ConvergenceReport run_convergence(const ConvergenceSpec& spec);

/// Sample points of the compact set, the domain shrunk by margin.
std::vector<Point> compact_samples(const Domain& d, double margin);

/// Per margin: smallest distance to the domain boundary of the preimages of
/// the reference image of the compact set with that margin.
std::vector<double> properness_probe(const ConvergenceSpec& spec, const LevelArtifacts& level,
                                     const std::vector<double>& margins);

struct RigiditySpec {
    std::vector<int> sizes{8, 16, 24};
    double amplitude = 0.1;
    std::vector<double> tgrid{0.0, 0.25, 0.5, 0.75, 1.0};
    double dt = 1e-4;
    std::uint64_t seed = 1;
};

void validate(const RigiditySpec& spec);

struct RigidityLevel {
    int size = 0;
    int num_white = 0;
    double max_abs_lambda = 0.0;
    double max_abs_laplacian = 0.0;  // of h, interior vertices, all t
    double max_abs_h = 0.0;
    bool bound_holds = false;         // |h| <= max |lambda| + 1e-6
    double var_h = 0.0;               // variance over vertices, averaged over t
    std::vector<double> laplacian_per_t;
};

struct RigidityReport {
    RigiditySpec spec;
    std::vector<RigidityLevel> levels;
};

RigidityReport run_rigidity(const RigiditySpec& spec);

struct TauReport {
    Eigen::VectorXd tau;  // +inf where origin lies in the closed disc
    double max_outer = 0.0;
    double max = 0.0;
};

/// tau(v) = r(v) / d(origin, disc(v)); the outer maximum is over boundary vertices.
TauReport tau_diagnostic(const CirclePattern& p, const WhiteGraph& g, const Point& origin);

json to_json(const ConvergenceReport& r);
json to_json(const RigidityReport& r);
json to_json(const TauReport& r);

}  // namespace kiteflow
