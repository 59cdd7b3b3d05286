#include "vtk_io.hpp"

#include <ostream>
#include <vector>

namespace cutheat {

namespace {

void write_header(std::ostream& os, const BackgroundMesh& mesh, const std::vector<int>& cells,
                  const std::string& title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.n_vertices() << " double\n";
    for (const Vec2& v : mesh.vertices) os << v.x << " " << v.y << " 0\n";
    os << "CELLS " << cells.size() << " " << 4 * cells.size() << "\n";
    for (int c : cells) {
        const auto& cv = mesh.cells[c];
        os << "3 " << cv[0] << " " << cv[1] << " " << cv[2] << "\n";
    }
    os << "CELL_TYPES " << cells.size() << "\n";
    for (size_t i = 0; i < cells.size(); ++i) os << "5\n";
}

std::vector<int> all_cells(const BackgroundMesh& mesh) {
    std::vector<int> cells(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) cells[c] = c;
    return cells;
}

}  // namespace

void write_mesh_vtk(std::ostream& os, const BackgroundMesh& mesh) {
    write_header(os, mesh, all_cells(mesh), "background mesh");
}

void write_cell_class_vtk(std::ostream& os, const BackgroundMesh& mesh, const ActiveMesh& active) {
    write_header(os, mesh, all_cells(mesh), "cell classification");
    os << "CELL_DATA " << mesh.n_cells() << "\nSCALARS cell_class int 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < mesh.n_cells(); ++c) os << static_cast<int>(active.cell_class[c]) << "\n";
}

void write_solution_vtk(std::ostream& os, const FESpace& space, const ActiveMesh& active,
                        const FEFunction& u, const std::string& name) {
    const BackgroundMesh& mesh = space.mesh();
    write_header(os, mesh, active.active_cells, "solution");
    os << "POINT_DATA " << mesh.n_vertices() << "\nSCALARS " << name
       << " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) os << u.coeffs[v] << "\n";
}

}  // namespace cutheat
