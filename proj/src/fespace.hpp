#pragma once

#include <array>
#include <vector>

#include "geometry.hpp"
#include "mesh.hpp"

namespace cutheat {

// Values and physical-frame derivatives of all local basis functions at one
// reference point. hess is (dxx, dxy, dyy).
struct BasisEval {
    std::vector<double> value;
    std::vector<Vec2> grad;
    std::vector<std::array<double, 3>> hess;
};

// Continuous P1/P2 Lagrange space on the background mesh. Dofs are global
// (P1: vertices; P2: vertices then facet midpoints); per-step activity is a
// mask over this fixed numbering.
class FESpace {
public:
    FESpace(const BackgroundMesh& mesh, int degree);

    const BackgroundMesh& mesh() const { return *mesh_; }
    int degree() const { return degree_; }
    int n_dofs() const { return n_dofs_; }
    int dofs_per_cell() const { return degree_ == 1 ? 3 : 6; }

    std::array<int, 6> cell_dofs(int cell) const;  // first dofs_per_cell() entries valid
    Vec2 dof_point(int dof) const;

    // Basis values/derivatives at a reference point, mapped to the physical
    // frame of the given cell (affine map). derivative_order in {0,1,2};
    // order 2 on P1 yields zeros.
    BasisEval eval_basis(int cell, const Vec2& ref_point, int derivative_order) const;

    Vec2 to_reference(int cell, const Vec2& x) const;
    Vec2 to_physical(int cell, const Vec2& ref) const;

    // Dofs carried by at least one active cell.
    std::vector<char> active_dof_mask(const ActiveMesh& active) const;

private:
    const BackgroundMesh* mesh_;
    int degree_;
    int n_dofs_;
};

// Coefficient vector over the global dofs with a per-step activity mask.
// Coefficients outside the mask are zero. fresh_dofs marks dofs that were
// zero-filled by transfer; reading them on cells that meet Omega^n is a
// contract violation tracked by the assembler.
struct FEFunction {
    const FESpace* space = nullptr;
    std::vector<double> coeffs;
    std::vector<char> active_mask;
    std::vector<char> fresh_dofs;

    double eval(int cell, const Vec2& ref_point) const;
    Vec2 eval_grad(int cell, const Vec2& ref_point) const;
};

// Nodal interpolation of u on the active cells; inactive dofs stay zero.
FEFunction interpolate(const FESpace& space, const ActiveMesh& active,
                       const std::function<double(const Vec2&)>& u);

// Carries u^{n-1} onto the step-n active dof set: shared dofs copy their
// coefficients, newly active dofs are zero-filled and flagged fresh.
FEFunction transfer(const FEFunction& prev, const ActiveMesh& new_active);

}  // namespace cutheat
