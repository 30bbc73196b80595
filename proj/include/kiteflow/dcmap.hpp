#pragma once

// Discrete conformal maps: the piecewise affine map between two kite
// patterns with the same combinatorics and angles.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "kiteflow/bquad.hpp"
#include "kiteflow/layout.hpp"

namespace kiteflow
{

using Triangle = std::array<Point, 3>;

/// Affine map x -> A x + t.
struct Affine {
    Eigen::Matrix2d A;
    Point t;

    Point operator()(const Point& x) const { return A * x + t; }
};

class DiscreteConformalMap
{
public:
    /// Each kite (w0, b1, w1, b3) splits along w0-w1 into (w0, b1, w1) and (w0, w1, b3).
    int num_triangles() const { return static_cast<int>(source_.size()); }
    const Triangle& source_triangle(int t) const { return source_[t]; }
    const Triangle& target_triangle(int t) const { return target_[t]; }
    const Affine& affine(int t) const { return maps_[t]; }

    /// Triangle containing z within the snap tolerance, or -1.
    int locate(const Point& z) const;
    /// Throws OutsideDomain.
    Point eval(const Point& z) const;

    double snap() const { return snap_; }

    friend DiscreteConformalMap build_map(const WhiteGraph&, const Labelling&, const KitePattern&,
                                          const Labelling&, const KitePattern&);

private:
    std::vector<Triangle> source_, target_;
    std::vector<Affine> maps_;
    double snap_ = 0.0;
    // uniform background grid over the source bounding box
    Point lo_ = Point::Zero();
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> cells_;
};

/// Throws CombinatoricsMismatch, AngleMismatch, NotEmbedded or DegenerateTriangle.
DiscreteConformalMap build_map(const WhiteGraph& g, const Labelling& alpha_source, const KitePattern& source,
                               const Labelling& alpha_target, const KitePattern& target);

struct DilatationReport {
    Eigen::VectorXd K;      // per triangle
    Eigen::MatrixX2d sigma;  // singular values, descending
    double max = 1.0;
};

DilatationReport dilatation(const DiscreteConformalMap& map);

/// u(v) = r_target(v) / r_source(v).
Eigen::VectorXd ratio_function(const Eigen::VectorXd& r_source, const Eigen::VectorXd& r_target);

/// max |map(z) - reference(z)| over the samples.
double sup_error(const DiscreteConformalMap& map, const std::function<Point(const Point&)>& reference,
                 const std::vector<Point>& samples);

struct SubharmonicityReport {
    double min_laplacian_u = 0.0;      // source conductances
    double min_laplacian_inv_u = 0.0;  // target conductances
};

/// Interior minima of Delta u and of tilde-Delta (1/u).
SubharmonicityReport subharmonicity(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r_source,
                                    const Eigen::VectorXd& r_target);

}  // namespace kiteflow
