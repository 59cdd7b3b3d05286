#pragma once

#include <array>
#include <vector>

#include "vec2.hpp"

namespace cutheat {

struct Rect {
    Vec2 lo;
    Vec2 hi;
};

// A facet (edge) of the triangulation. cell[1] < 0 on the domain boundary.
struct Facet {
    std::array<int, 2> vertices;
    std::array<int, 2> cells;
};

struct FacetGeometry {
    Vec2 normal;  // unit, oriented out of the lower-indexed incident cell
    double length;
    Vec2 midpoint;
};

// Fixed quasi-uniform background triangulation of a bounding box. All cells
// are positively oriented (counterclockwise). Immutable after construction.
class BackgroundMesh {
public:
    static constexpr int dim = 2;

    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> cells;
    std::vector<Facet> facets;
    std::vector<std::array<int, 3>> cell_facets;  // facet k spans local vertices (k, k+1 mod 3)
    double h = 0.0;                               // maximum cell diameter
    Rect box;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_facets() const { return static_cast<int>(facets.size()); }

    bool facet_is_boundary(int f) const { return facets[f].cells[1] < 0; }

    std::array<Vec2, 3> cell_vertices(int c) const {
        const auto& cv = cells[c];
        return {vertices[cv[0]], vertices[cv[1]], vertices[cv[2]]};
    }

    double cell_area(int c) const {
        auto v = cell_vertices(c);
        return triangle_area(v[0], v[1], v[2]);
    }

    double cell_diameter(int c) const;

    FacetGeometry facet_geometry(int f) const;
};

// n x n grid of squares, each split along the bottom-left-to-top-right
// diagonal. 2*n^2 cells, h = diagonal length of one square.
BackgroundMesh build_uniform_mesh(const Rect& box, int n);

// Splits every triangle into 4 congruent children via edge midpoints.
BackgroundMesh refine_uniform(const BackgroundMesh& mesh);

}  // namespace cutheat
