#pragma once

// Combinatorial substrate: b-quad-graphs (bipartite quadrilateral cell
// complexes), the derived graph of white vertices, and labellings.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace kiteflow
{

/// Corner ids of a quad, counterclockwise, white corners at positions 0 and 2.
using QuadCorners = std::array<int, 4>;

class BQuadGraph
{
public:
    BQuadGraph() = default;

    int num_vertices() const { return static_cast<int>(is_white_.size()); }
    int num_quads() const { return static_cast<int>(quads_.size()); }

    const std::vector<QuadCorners>& quads() const { return quads_; }
    const QuadCorners& quad(int q) const { return quads_[q]; }

    /// Ascending global ids.
    const std::vector<int>& white_vertices() const { return white_; }
    const std::vector<int>& black_vertices() const { return black_; }

    bool is_white(int id) const { return is_white_[id]; }
    /// Position of a white (black) vertex in white_vertices() (black_vertices()).
    int color_index(int id) const { return color_index_[id]; }

    bool vertex_is_boundary(int id) const { return vertex_boundary_[id]; }
    bool quad_is_boundary(int q) const { return quad_boundary_[q]; }

    /// Incident quads in counterclockwise order. For boundary vertices the
    /// fan starts at the quad whose forward edge lies on the boundary.
    const std::vector<int>& fan(int id) const { return fans_[id]; }

    /// Position of vertex id among the corners of quad q, or -1.
    int corner_position(int q, int id) const;

    friend struct BQuadBuilder;

private:
    std::vector<QuadCorners> quads_;
    std::vector<int> white_, black_;
    std::vector<char> is_white_;
    std::vector<int> color_index_;
    std::vector<char> vertex_boundary_;
    std::vector<char> quad_boundary_;
    std::vector<std::vector<int>> fans_;
};

/// Validates the corner tuples and builds the complex. Colors follow from
/// the corner positions.
BQuadGraph build_bquad(std::vector<QuadCorners> quads);
/// As above, additionally checking the corners against explicit color lists.
BQuadGraph build_bquad(std::vector<QuadCorners> quads, const std::vector<int>& white,
                       const std::vector<int>& black);

/// Intersection angle per quad, radians.
struct Labelling {
    Eigen::VectorXd alpha;
};

struct WhiteEdge {
    int v0, v1;  // white indices; quad corners 0 and 2
    int b1, b3;  // black indices; quad corners 1 and 3
};

/// One entry of the counterclockwise edge cycle around a white vertex.
struct Incidence {
    int edge;         // == quad id
    int neighbor;     // white index
    int black_minus;  // black index of the corner clockwise from the edge
    int black_plus;   // black index of the corner counterclockwise from the edge
};

/// Graph G of white vertices; edge e corresponds to quad e.
struct WhiteGraph {
    int num_vertices = 0;
    int num_black = 0;
    std::vector<WhiteEdge> edges;
    std::vector<std::vector<Incidence>> incident;
    std::vector<char> boundary;
    std::vector<int> interior_vertices;
    std::vector<int> boundary_vertices;
    /// global ids, for reporting
    std::vector<int> white_ids, black_ids;

    int num_edges() const { return static_cast<int>(edges.size()); }
    bool is_boundary(int v) const { return boundary[v]; }
    /// Position of v among interior (boundary) vertices, or -1.
    std::vector<int> interior_index, boundary_index;
};

WhiteGraph derive_white_graph(const BQuadGraph& graph);

struct AdmissibilityReport {
    bool admissible = true;
    /// (black vertex id, angle sum)
    std::vector<std::pair<int, double>> violations;
};

inline constexpr double kAdmissibilityTol = 1e-12;

AdmissibilityReport check_admissible(const BQuadGraph& graph, const Labelling& alpha);

/// Throws AngleOutOfRange unless every alpha lies in (0, pi) and sizes match.
void validate_labelling(const BQuadGraph& graph, const Labelling& alpha);

/// A b-quad-graph cut from the unit square lattice, with lattice coordinates.
struct GridComplex {
    BQuadGraph graph;
    std::vector<Eigen::Vector2i> lattice;  // per vertex id
};

/**
 * Builds the b-quad-graph of a set of unit lattice cells, cell (i, j) being
 * [i, i+1] x [j, j+1]. Lattice points with i + j even are white when
 * origin_white is set. Whites are numbered first, row-major, then blacks.
 */
GridComplex grid_complex(const std::vector<Eigen::Vector2i>& cells, bool origin_white = true);

/// n columns by m rows of cells with constant label alpha0.
std::pair<BQuadGraph, Labelling> generate_square_grid(int n, int m, double alpha0,
                                                      bool origin_white = true);

std::pair<BQuadGraph, Labelling> load_bquad(const std::string& path);
void save_bquad(const std::string& path, const BQuadGraph& graph, const Labelling& alpha);

}  // namespace kiteflow
