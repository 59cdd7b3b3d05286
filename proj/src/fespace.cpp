#include "fespace.hpp"

#include <stdexcept>

namespace cutheat {

FESpace::FESpace(const BackgroundMesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
    if (degree != 1 && degree != 2) throw std::invalid_argument("polynomial degree must be 1 or 2");
    n_dofs_ = mesh.n_vertices() + (degree == 2 ? mesh.n_facets() : 0);
}

std::array<int, 6> FESpace::cell_dofs(int cell) const {
    const auto& cv = mesh_->cells[cell];
    std::array<int, 6> dofs = {cv[0], cv[1], cv[2], -1, -1, -1};
    if (degree_ == 2) {
        const auto& cf = mesh_->cell_facets[cell];
        for (int k = 0; k < 3; ++k) dofs[3 + k] = mesh_->n_vertices() + cf[k];
    }
    return dofs;
}

Vec2 FESpace::dof_point(int dof) const {
    if (dof < mesh_->n_vertices()) return mesh_->vertices[dof];
    const Facet& fa = mesh_->facets[dof - mesh_->n_vertices()];
    return 0.5 * (mesh_->vertices[fa.vertices[0]] + mesh_->vertices[fa.vertices[1]]);
}

Vec2 FESpace::to_physical(int cell, const Vec2& ref) const {
    const auto v = mesh_->cell_vertices(cell);
    return v[0] + ref.x * (v[1] - v[0]) + ref.y * (v[2] - v[0]);
}

Vec2 FESpace::to_reference(int cell, const Vec2& x) const {
    const auto v = mesh_->cell_vertices(cell);
    const Vec2 e1 = v[1] - v[0], e2 = v[2] - v[0], d = x - v[0];
    const double det = cross(e1, e2);
    return {(d.x * e2.y - d.y * e2.x) / det, (d.y * e1.x - d.x * e1.y) / det};
}

BasisEval FESpace::eval_basis(int cell, const Vec2& ref, int k) const {
    if (k < 0 || k > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
    const int nloc = dofs_per_cell();
    const double l0 = 1.0 - ref.x - ref.y, l1 = ref.x, l2 = ref.y;

    // reference values, gradients and hessians
    std::vector<double> val(nloc);
    std::vector<Vec2> gref(nloc);
    std::vector<std::array<double, 3>> href(nloc, {0.0, 0.0, 0.0});
    const Vec2 gl0{-1.0, -1.0}, gl1{1.0, 0.0}, gl2{0.0, 1.0};
    if (degree_ == 1) {
        val = {l0, l1, l2};
        gref = {gl0, gl1, gl2};
    } else {
        val = {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
               4.0 * l0 * l1,         4.0 * l1 * l2,         4.0 * l2 * l0};
        auto gvertex = [](double l, const Vec2& gl) { return (4.0 * l - 1.0) * gl; };
        gref = {gvertex(l0, gl0),
                gvertex(l1, gl1),
                gvertex(l2, gl2),
                4.0 * (l1 * gl0 + l0 * gl1),
                4.0 * (l2 * gl1 + l1 * gl2),
                4.0 * (l0 * gl2 + l2 * gl0)};
        if (k == 2) {
            auto h_of = [](const Vec2& ga, const Vec2& gb) {
                return std::array<double, 3>{2.0 * ga.x * gb.x, ga.x * gb.y + ga.y * gb.x,
                                             2.0 * ga.y * gb.y};
            };
            // hessian of l*(2l-1) is 4*gl gl^T; hessian of 4*la*lb is 4*(ga gb^T + gb ga^T)
            href = {h_of(gl0, gl0), h_of(gl1, gl1), h_of(gl2, gl2)};
            for (auto& h : href)
                for (double& e : h) e *= 2.0;
            href.push_back(h_of(gl0, gl1));
            href.push_back(h_of(gl1, gl2));
            href.push_back(h_of(gl2, gl0));
            for (int i = 3; i < 6; ++i)
                for (double& e : href[i]) e *= 4.0;
        }
    }

    BasisEval out;
    out.value = std::move(val);
    if (k >= 1) {
        // grad_x = Jinv^T grad_ref
        const auto v = mesh_->cell_vertices(cell);
        const Vec2 e1 = v[1] - v[0], e2 = v[2] - v[0];
        const double det = cross(e1, e2);
        const double a = e2.y / det, b = -e2.x / det;   // d(ref.x)/dx, d(ref.x)/dy
        const double c = -e1.y / det, d = e1.x / det;   // d(ref.y)/dx, d(ref.y)/dy
        out.grad.resize(nloc);
        for (int i = 0; i < nloc; ++i)
            out.grad[i] = {gref[i].x * a + gref[i].y * c, gref[i].x * b + gref[i].y * d};
        if (k == 2) {
            out.hess.assign(nloc, {0.0, 0.0, 0.0});
            for (int i = 0; i < nloc; ++i) {
                const double hxx = href[i][0], hxy = href[i][1], hyy = href[i][2];
                // H_phys = Jinv^T H_ref Jinv with Jinv rows (a,b),(c,d)
                out.hess[i][0] = a * (hxx * a + hxy * c) + c * (hxy * a + hyy * c);
                out.hess[i][1] = a * (hxx * b + hxy * d) + c * (hxy * b + hyy * d);
                out.hess[i][2] = b * (hxx * b + hxy * d) + d * (hxy * b + hyy * d);
            }
        }
    }
    return out;
}

std::vector<char> FESpace::active_dof_mask(const ActiveMesh& active) const {
    std::vector<char> mask(n_dofs_, 0);
    for (int c : active.active_cells)
        for (int i = 0; i < dofs_per_cell(); ++i) mask[cell_dofs(c)[i]] = 1;
    return mask;
}

double FEFunction::eval(int cell, const Vec2& ref_point) const {
    const auto eval = space->eval_basis(cell, ref_point, 0);
    const auto dofs = space->cell_dofs(cell);
    double sum = 0.0;
    for (int i = 0; i < space->dofs_per_cell(); ++i) sum += coeffs[dofs[i]] * eval.value[i];
    return sum;
}

Vec2 FEFunction::eval_grad(int cell, const Vec2& ref_point) const {
    const auto eval = space->eval_basis(cell, ref_point, 1);
    const auto dofs = space->cell_dofs(cell);
    Vec2 sum{};
    for (int i = 0; i < space->dofs_per_cell(); ++i) sum += coeffs[dofs[i]] * eval.grad[i];
    return sum;
}

FEFunction interpolate(const FESpace& space, const ActiveMesh& active,
                       const std::function<double(const Vec2&)>& u) {
    FEFunction fn;
    fn.space = &space;
    fn.coeffs.assign(space.n_dofs(), 0.0);
    fn.active_mask = space.active_dof_mask(active);
    fn.fresh_dofs.assign(space.n_dofs(), 0);
    for (int dof = 0; dof < space.n_dofs(); ++dof)
        if (fn.active_mask[dof]) fn.coeffs[dof] = u(space.dof_point(dof));
    return fn;
}

FEFunction transfer(const FEFunction& prev, const ActiveMesh& new_active) {
    FEFunction fn;
    fn.space = prev.space;
    fn.coeffs.assign(prev.space->n_dofs(), 0.0);
    fn.active_mask = prev.space->active_dof_mask(new_active);
    fn.fresh_dofs.assign(prev.space->n_dofs(), 0);
    for (int dof = 0; dof < prev.space->n_dofs(); ++dof) {
        if (!fn.active_mask[dof]) continue;
        if (prev.active_mask[dof])
            fn.coeffs[dof] = prev.coeffs[dof];
        else
            fn.fresh_dofs[dof] = 1;
    }
    return fn;
}

}  // namespace cutheat
