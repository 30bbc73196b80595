#include "kiteflow/dcmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "kiteflow/error.hpp"
#include "kiteflow/network.hpp"

namespace kiteflow
{

namespace
{

constexpr double kSnap = 1e-9;

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_distance(const Point& z, const Point& a, const Point& b)
{
    const Point ab = b - a;
    const double len2 = ab.squaredNorm();
    const double s = len2 > 0 ? std::clamp((z - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (z - (a + s * ab)).norm();
}

/// Zero inside, Euclidean distance outside.
double triangle_distance(const Triangle& t, const Point& z)
{
    const double orient = cross(t[1] - t[0], t[2] - t[0]);
    bool inside = true;
    for (int k = 0; k < 3; ++k)
        if (cross(t[(k + 1) % 3] - t[k], z - t[k]) * orient < 0)
            inside = false;
    if (inside)
        return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k)
        d = std::min(d, segment_distance(z, t[k], t[(k + 1) % 3]));
    return d;
}

std::array<Triangle, 2> halves(const std::array<Point, 4>& k)
{
    return {Triangle{k[0], k[1], k[2]}, Triangle{k[0], k[2], k[3]}};
}

}  // namespace

DiscreteConformalMap build_map(const WhiteGraph& g, const Labelling& alpha_source, const KitePattern& source,
                               const Labelling& alpha_target, const KitePattern& target)
{
    const auto m = static_cast<std::size_t>(g.num_edges());
    if (source.kites.size() != m || target.kites.size() != m)
        throw Error(ErrorKind::CombinatoricsMismatch, "map: both patterns need one kite per edge of the graph");
    if (alpha_source.alpha.size() != alpha_target.alpha.size() ||
        alpha_source.alpha.size() != static_cast<Eigen::Index>(m))
        throw Error(ErrorKind::CombinatoricsMismatch, "map: labellings do not match the graph");
    for (Eigen::Index e = 0; e < alpha_source.alpha.size(); ++e)
        if (std::abs(alpha_source.alpha[e] - alpha_target.alpha[e]) > 1e-12)
            throw Error(ErrorKind::AngleMismatch, "map: intersection angles differ on edge " + std::to_string(e));
    for (const auto* k : {&source, &target}) {
        const auto rep = check_embedded(*k, g);
        if (!rep.embedded)
            throw Error(ErrorKind::NotEmbedded, std::string("map: ") + (k == &source ? "source" : "target") +
                                                    " kites " + std::to_string(rep.kite_a) + " and " +
                                                    std::to_string(rep.kite_b) + " overlap");
    }

    DiscreteConformalMap map;
    Point lo = Point::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
    for (std::size_t e = 0; e < m; ++e) {
        const auto s = halves(source.kites[e]);
        const auto t = halves(target.kites[e]);
        for (int h = 0; h < 2; ++h) {
            Eigen::Matrix2d P, Q;
            P << s[h][1] - s[h][0], s[h][2] - s[h][0];
            Q << t[h][1] - t[h][0], t[h][2] - t[h][0];
            const double scale = std::max(P.squaredNorm(), Q.squaredNorm());
            if (std::abs(P.determinant()) <= 1e-14 * scale || std::abs(Q.determinant()) <= 1e-14 * scale)
                throw Error(ErrorKind::DegenerateTriangle,
                            "map: degenerate triangle in kite " + std::to_string(e));
            Affine a;
            a.A = Q * P.inverse();
            a.t = t[h][0] - a.A * s[h][0];
            map.source_.push_back(s[h]);
            map.target_.push_back(t[h]);
            map.maps_.push_back(a);
            for (const auto& p : s[h]) {
                lo = lo.cwiseMin(p);
                hi = hi.cwiseMax(p);
            }
        }
    }
    if (m == 0)
        return map;

    const double diam = (hi - lo).norm();
    map.snap_ = kSnap * diam;
    const double area = std::max((hi - lo).x() * (hi - lo).y(), diam * diam * 1e-6);
    map.cell_ = std::sqrt(area / static_cast<double>(map.source_.size()));
    map.lo_ = lo - Point::Constant(map.snap_);
    map.nx_ = static_cast<int>(std::floor((hi.x() - map.lo_.x() + map.snap_) / map.cell_)) + 1;
    map.ny_ = static_cast<int>(std::floor((hi.y() - map.lo_.y() + map.snap_) / map.cell_)) + 1;
    map.cells_.assign(static_cast<std::size_t>(map.nx_) * map.ny_, {});
    for (int t = 0; t < map.num_triangles(); ++t) {
        Point a = map.source_[t][0], b = a;
        for (const auto& p : map.source_[t]) {
            a = a.cwiseMin(p);
            b = b.cwiseMax(p);
        }
        const int i0 = std::max(0, static_cast<int>(std::floor((a.x() - map.snap_ - map.lo_.x()) / map.cell_)));
        const int j0 = std::max(0, static_cast<int>(std::floor((a.y() - map.snap_ - map.lo_.y()) / map.cell_)));
        const int i1 = std::min(map.nx_ - 1, static_cast<int>(std::floor((b.x() + map.snap_ - map.lo_.x()) / map.cell_)));
        const int j1 = std::min(map.ny_ - 1, static_cast<int>(std::floor((b.y() + map.snap_ - map.lo_.y()) / map.cell_)));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                map.cells_[static_cast<std::size_t>(j) * map.nx_ + i].push_back(t);
    }
    return map;
}

int DiscreteConformalMap::locate(const Point& z) const
{
    if (source_.empty() || !z.allFinite())
        return -1;
    auto best_of = [&](const std::vector<int>& candidates) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int t : candidates) {
            const double d = triangle_distance(source_[t], z);
            if (d < best_d) {
                best_d = d;
                best = t;
                if (d == 0.0)
                    break;
            }
        }
        return best_d <= snap_ ? best : -1;
    };
    const int i = static_cast<int>(std::floor((z.x() - lo_.x()) / cell_));
    const int j = static_cast<int>(std::floor((z.y() - lo_.y()) / cell_));
    if (i >= 0 && j >= 0 && i < nx_ && j < ny_) {
        const int t = best_of(cells_[static_cast<std::size_t>(j) * nx_ + i]);
        if (t >= 0)
            return t;
    }
    std::vector<int> all(source_.size());
    for (std::size_t t = 0; t < all.size(); ++t)
        all[t] = static_cast<int>(t);
    return best_of(all);
}

Point DiscreteConformalMap::eval(const Point& z) const
{
    const int t = locate(z);
    if (t < 0)
        throw Error(ErrorKind::OutsideDomain, "map: point (" + std::to_string(z.x()) + ", " + std::to_string(z.y()) +
                                                  ") lies outside the kite union");
    return maps_[t](z);
}

DilatationReport dilatation(const DiscreteConformalMap& map)
{
    DilatationReport rep;
    const int n = map.num_triangles();
    rep.K.resize(n);
    rep.sigma.resize(n, 2);
    for (int t = 0; t < n; ++t) {
        const Eigen::JacobiSVD<Eigen::Matrix2d> svd(map.affine(t).A);
        const Eigen::Vector2d s = svd.singularValues();
        if (!(s[1] > 0.0))
            throw Error(ErrorKind::DegenerateTriangle, "dilatation: singular affine part on triangle " + std::to_string(t));
        rep.sigma.row(t) = s.transpose();
        rep.K[t] = s[0] / s[1];
    }
    rep.max = n ? rep.K.maxCoeff() : 1.0;
    return rep;
}

Eigen::VectorXd ratio_function(const Eigen::VectorXd& r_source, const Eigen::VectorXd& r_target)
{
    if (r_source.size() != r_target.size())
        throw Error(ErrorKind::CombinatoricsMismatch, "ratio: radius vectors differ in length");
    if (!(r_source.array() > 0).all() || !(r_target.array() > 0).all())
        throw Error(ErrorKind::MissingRadius, "ratio: radii must be positive");
    return r_target.cwiseQuotient(r_source);
}

double sup_error(const DiscreteConformalMap& map, const std::function<Point(const Point&)>& reference,
                 const std::vector<Point>& samples)
{
    double worst = 0.0;
    for (const auto& z : samples)
        worst = std::max(worst, (map.eval(z) - reference(z)).norm());
    return worst;
}

SubharmonicityReport subharmonicity(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r_source,
                                    const Eigen::VectorXd& r_target)
{
    const Eigen::VectorXd u = ratio_function(r_source, r_target);
    const Eigen::VectorXd lu = laplacian(conductances_from_pattern(g, alpha, r_source), u);
    const Eigen::VectorXd lv = laplacian(conductances_from_pattern(g, alpha, r_target), u.cwiseInverse());
    SubharmonicityReport rep;
    rep.min_laplacian_u = std::numeric_limits<double>::infinity();
    rep.min_laplacian_inv_u = std::numeric_limits<double>::infinity();
    for (int v : g.interior_vertices) {
        rep.min_laplacian_u = std::min(rep.min_laplacian_u, lu[v]);
        rep.min_laplacian_inv_u = std::min(rep.min_laplacian_inv_u, lv[v]);
    }
    return rep;
}

}  // namespace kiteflow
