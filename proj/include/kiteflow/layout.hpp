#pragma once

// Realization of a radius function as a planar circle pattern and its kites.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kiteflow/bquad.hpp"

namespace kiteflow
{

using Point = Eigen::Vector2d;

/// Places the root center and the direction of its first incident edge.
struct Anchor {
    int root = 0;  // white index
    Point position = Point::Zero();
    double direction = 0.0;
};

struct CirclePattern {
    std::vector<Point> center;  // per white index
    Eigen::VectorXd radius;
    std::vector<Point> black;   // per black index
    Anchor anchor;
    /// edges used for placement during the traversal
    std::vector<char> tree_edge;
    /// direction of the first incident edge at each center, as laid out
    std::vector<double> direction0;
};

/// Corners per edge in quad order: white v0, black b1, white v1, black b3.
struct KitePattern {
    std::vector<std::array<Point, 4>> kites;
};

struct LayoutOptions {
    /// reject radius functions whose angle-sum residual exceeds this
    double residual_tol = 1e-8;
    bool check_residual = true;
};

/// Throws NotASolution if the residual precondition fails.
CirclePattern layout(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r,
                     const Anchor& anchor = {}, const LayoutOptions& opts = {});

struct ClosureReport {
    double max_residual = 0.0;
    Eigen::VectorXd per_edge;  // mismatch of the far center predicted across each edge
};

/// Mismatch over non-tree edges; tree edges contribute zero by construction.
ClosureReport closure_residual(const CirclePattern& p, const WhiteGraph& g, const Labelling& alpha);

/// Largest distance between the two constructions of a black point, one from
/// each circle through it.
double black_point_discrepancy(const CirclePattern& p, const WhiteGraph& g, const Labelling& alpha);

/// Bounding-box diagonal of all circles.
double pattern_diameter(const CirclePattern& p);

KitePattern kites(const CirclePattern& p, const WhiteGraph& g);

struct EmbeddingReport {
    bool embedded = true;
    int kite_a = -1, kite_b = -1;  // first offending pair
};

/// Pairwise interior disjointness; kites sharing a combinatorial vertex may touch.
EmbeddingReport check_embedded(const KitePattern& k, const WhiteGraph& g);

/// Convexity of the kite quadrilateral by orientation of consecutive corners.
bool kite_is_convex(const std::array<Point, 4>& kite);

struct SvgOptions {
    double width = 800.0;
    double margin = 10.0;
    bool circles = true;
    bool kites = true;
    bool vertices = true;
};

std::string to_svg(const CirclePattern& p, const WhiteGraph& g, const SvgOptions& opts = {});

void save_pattern(const std::string& path, const CirclePattern& p);
CirclePattern load_pattern(const std::string& path);

/// Applies z -> a z + b (complex a, b) to every point and scales radii by |a|.
CirclePattern transform(const CirclePattern& p, std::complex<double> a, std::complex<double> b);

}  // namespace kiteflow
