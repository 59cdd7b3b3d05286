#pragma once

#include <iosfwd>
#include <string>

#include "fespace.hpp"

namespace cutheat {

// Legacy-VTK (ASCII, unstructured grid) debug dumps.
void write_mesh_vtk(std::ostream& os, const BackgroundMesh& mesh);
void write_cell_class_vtk(std::ostream& os, const BackgroundMesh& mesh, const ActiveMesh& active);

// Vertex values of u on the active cells (P2 edge dofs are not exported).
void write_solution_vtk(std::ostream& os, const FESpace& space, const ActiveMesh& active,
                        const FEFunction& u, const std::string& name);

}  // namespace cutheat
