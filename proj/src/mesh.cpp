#include "mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace cutheat {

double BackgroundMesh::cell_diameter(int c) const {
    auto v = cell_vertices(c);
    return std::max({dist(v[0], v[1]), dist(v[1], v[2]), dist(v[2], v[0])});
}

FacetGeometry BackgroundMesh::facet_geometry(int f) const {
    if (f < 0 || f >= n_facets()) throw std::out_of_range("facet index out of range");
    const Facet& fa = facets[f];
    const Vec2 a = vertices[fa.vertices[0]];
    const Vec2 b = vertices[fa.vertices[1]];
    const Vec2 tangent = b - a;
    const double len = norm(tangent);
    Vec2 n = perp(tangent) / len;

    // Orient out of the lower-indexed incident cell: away from the vertex of
    // that cell opposite to the facet.
    const int c = fa.cells[0];
    const auto& cv = cells[c];
    Vec2 opposite{};
    for (int lv = 0; lv < 3; ++lv) {
        if (cv[lv] != fa.vertices[0] && cv[lv] != fa.vertices[1]) opposite = vertices[cv[lv]];
    }
    const Vec2 mid = 0.5 * (a + b);
    if (dot(n, mid - opposite) < 0.0) n = -1.0 * n;
    return {n, len, mid};
}

namespace {

// Builds the facet table and per-cell facet lists from the cell list.
// Facet k of a cell spans its local vertices (k, k+1 mod 3).
void build_facets(BackgroundMesh& mesh) {
    std::map<std::pair<int, int>, int> facet_of_edge;
    mesh.facets.clear();
    mesh.cell_facets.assign(mesh.cells.size(), {-1, -1, -1});
    for (int c = 0; c < mesh.n_cells(); ++c) {
        for (int k = 0; k < 3; ++k) {
            const int a = mesh.cells[c][k];
            const int b = mesh.cells[c][(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto it = facet_of_edge.find(key);
            if (it == facet_of_edge.end()) {
                const int f = mesh.n_facets();
                mesh.facets.push_back({{key.first, key.second}, {c, -1}});
                facet_of_edge.emplace(key, f);
                mesh.cell_facets[c][k] = f;
            } else {
                mesh.facets[it->second].cells[1] = c;
                mesh.cell_facets[c][k] = it->second;
            }
        }
    }
}

void finalize(BackgroundMesh& mesh) {
    build_facets(mesh);
    mesh.h = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        if (mesh.cell_area(c) <= 0.0) throw std::runtime_error("negative cell orientation");
        mesh.h = std::max(mesh.h, mesh.cell_diameter(c));
    }
}

}  // namespace

BackgroundMesh build_uniform_mesh(const Rect& box, int n) {
    if (n < 1) throw std::invalid_argument("subdivision count must be >= 1");
    if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y))
        throw std::invalid_argument("degenerate bounding box");

    BackgroundMesh mesh;
    mesh.box = box;
    const double dx = (box.hi.x - box.lo.x) / n;
    const double dy = (box.hi.y - box.lo.y) / n;
    mesh.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({box.lo.x + i * dx, box.lo.y + j * dy});

    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    mesh.cells.reserve(static_cast<size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
            // split along the bottom-left to top-right diagonal
            mesh.cells.push_back({v00, v10, v11});
            mesh.cells.push_back({v00, v11, v01});
        }
    }
    finalize(mesh);
    return mesh;
}

BackgroundMesh refine_uniform(const BackgroundMesh& parent) {
    BackgroundMesh mesh;
    mesh.box = parent.box;
    mesh.vertices = parent.vertices;

    // one new vertex per parent facet (its midpoint)
    std::vector<int> midpoint_vertex(parent.n_facets());
    for (int f = 0; f < parent.n_facets(); ++f) {
        const Facet& fa = parent.facets[f];
        midpoint_vertex[f] = mesh.n_vertices();
        mesh.vertices.push_back(0.5 * (parent.vertices[fa.vertices[0]] + parent.vertices[fa.vertices[1]]));
    }

    mesh.cells.reserve(static_cast<size_t>(4) * parent.n_cells());
    for (int c = 0; c < parent.n_cells(); ++c) {
        const auto& cv = parent.cells[c];
        // midpoint of the edge (k, k+1 mod 3)
        std::array<int, 3> m{};
        for (int k = 0; k < 3; ++k) m[k] = midpoint_vertex[parent.cell_facets[c][k]];
        mesh.cells.push_back({cv[0], m[0], m[2]});
        mesh.cells.push_back({m[0], cv[1], m[1]});
        mesh.cells.push_back({m[2], m[1], cv[2]});
        mesh.cells.push_back({m[0], m[1], m[2]});
    }
    finalize(mesh);
    return mesh;
}

}  // namespace cutheat
