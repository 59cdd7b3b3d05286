#include "forms.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cutheat {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// k-th directional derivative of every local basis function along n
void normal_derivatives(const FESpace& space, int cell, const Vec2& ref, const Vec2& n, int order,
                        std::vector<double>& out) {
    const auto eval = space.eval_basis(cell, ref, order);
    const int nloc = space.dofs_per_cell();
    out.resize(nloc);
    if (order == 1) {
        for (int i = 0; i < nloc; ++i) out[i] = dot(eval.grad[i], n);
    } else {
        for (int i = 0; i < nloc; ++i) {
            if (space.degree() == 1) {
                out[i] = 0.0;
            } else {
                const auto& H = eval.hess[i];
                out[i] = n.x * (H[0] * n.x + H[1] * n.y) + n.y * (H[1] * n.x + H[2] * n.y);
            }
        }
    }
}

}  // namespace

DofMap build_dof_map(const ActiveMesh& active, const FESpace& space) {
    DofMap map;
    map.active_of_global.assign(space.n_dofs(), -1);
    const auto mask = space.active_dof_mask(active);
    for (int dof = 0; dof < space.n_dofs(); ++dof) {
        if (!mask[dof]) continue;
        map.active_of_global[dof] = map.n_active();
        map.global_of_active.push_back(dof);
    }
    return map;
}

std::vector<double> restrict_to_active(const DofMap& dofs, const std::vector<double>& global) {
    std::vector<double> out(dofs.n_active());
    for (int a = 0; a < dofs.n_active(); ++a) out[a] = global[dofs.global_of_active[a]];
    return out;
}

std::vector<double> scatter_to_global(const DofMap& dofs, const std::vector<double>& active,
                                      int n_global) {
    std::vector<double> out(n_global, 0.0);
    for (int a = 0; a < dofs.n_active(); ++a) out[dofs.global_of_active[a]] = active[a];
    return out;
}

StepOperators assemble_operators(const ActiveMesh& active, const FESpace& space,
                                 const MovingDomain& domain, double t) {
    StepOperators ops;
    ops.dofs = build_dof_map(active, space);
    const int n = ops.dofs.n_active();
    const int nloc = space.dofs_per_cell();
    const int m = space.degree();
    const QuadRule& vol_rule = reference_rule(2 * m);
    const QuadRule& seg_rule = gauss_rule_1d(m + 1);

    Triplets tm, tk, tn, tb;
    ops.cell_reads_previous.assign(space.mesh().n_cells(), 0);

    std::vector<int> adof(nloc);
    for (int c : active.active_cells) {
        if (active.cell_class[c] == CellClass::DeltaStrip) continue;
        const auto geo = cell_cut_geometry(space.mesh(), domain, c, t);
        if (geo.interior_subtris.empty() && geo.boundary_segments.empty()) continue;
        // both the volume and the Nitsche terms read u^{n-1} here
        ops.cell_reads_previous[c] = 1;

        const auto dofs = space.cell_dofs(c);
        for (int i = 0; i < nloc; ++i) adof[i] = ops.dofs.active_of_global[dofs[i]];

        for (const auto& tri : geo.interior_subtris) {
            const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
            const double jac = cross(e1, e2);
            for (size_t q = 0; q < vol_rule.points.size(); ++q) {
                const Vec2 x = tri[0] + vol_rule.points[q].x * e1 + vol_rule.points[q].y * e2;
                const double w = vol_rule.weights[q] * jac;
                const auto eval = space.eval_basis(c, space.to_reference(c, x), 1);
                for (int i = 0; i < nloc; ++i) {
                    for (int j = 0; j < nloc; ++j) {
                        tm.emplace_back(adof[i], adof[j], w * eval.value[i] * eval.value[j]);
                        tk.emplace_back(adof[i], adof[j], w * dot(eval.grad[i], eval.grad[j]));
                    }
                }
            }
        }
        for (const auto& seg : geo.boundary_segments) {
            const double len = dist(seg.a, seg.b);
            for (size_t q = 0; q < seg_rule.points.size(); ++q) {
                const Vec2 x = seg.a + seg_rule.points[q].x * (seg.b - seg.a);
                const double w = seg_rule.weights[q] * len;
                const auto eval = space.eval_basis(c, space.to_reference(c, x), 1);
                for (int i = 0; i < nloc; ++i) {
                    for (int j = 0; j < nloc; ++j) {
                        tn.emplace_back(adof[i], adof[j], w * dot(eval.grad[j], seg.normal) * eval.value[i]);
                        tb.emplace_back(adof[i], adof[j], w * eval.value[i] * eval.value[j]);
                    }
                }
            }
        }
    }

    ops.mass.set_from_triplets(n, n, tm);
    ops.stiffness.set_from_triplets(n, n, tk);
    ops.nitsche.set_from_triplets(n, n, tn);
    ops.boundary_mass.set_from_triplets(n, n, tb);
    ops.ghost = assemble_ghost(active, space, ops.dofs);
    return ops;
}

SparseMatrix assemble_ghost(const ActiveMesh& active, const FESpace& space, const DofMap& dofs) {
    const BackgroundMesh& mesh = space.mesh();
    const int m = space.degree();
    const int nloc = space.dofs_per_cell();
    const QuadRule& rule = gauss_rule_1d(m + 1);
    const double h = mesh.h;

    Triplets tg;
    std::vector<double> dn0, dn1;
    for (int f : active.facets_ghost) {
        const Facet& fa = mesh.facets[f];
        const int c0 = fa.cells[0], c1 = fa.cells[1];
        const FacetGeometry fg = mesh.facet_geometry(f);
        const Vec2 a = mesh.vertices[fa.vertices[0]], b = mesh.vertices[fa.vertices[1]];

        const auto dofs0 = space.cell_dofs(c0);
        const auto dofs1 = space.cell_dofs(c1);
        // union of the two cells' dofs; shared dofs appear once
        std::vector<int> union_dofs(dofs0.begin(), dofs0.begin() + nloc);
        std::vector<int> side1_pos(nloc);
        for (int i = 0; i < nloc; ++i) {
            int pos = -1;
            for (size_t u = 0; u < union_dofs.size(); ++u)
                if (union_dofs[u] == dofs1[i]) pos = static_cast<int>(u);
            if (pos < 0) {
                pos = static_cast<int>(union_dofs.size());
                union_dofs.push_back(dofs1[i]);
            }
            side1_pos[i] = pos;
        }
        const int nu = static_cast<int>(union_dofs.size());
        std::vector<double> jump(nu);

        for (int k = 1; k <= m; ++k) {
            const double kfac = (k == 1) ? 1.0 : 2.0;  // k! for k in {1,2}
            const double coef = std::pow(h, 2 * k - 1) / (kfac * kfac);
            for (size_t q = 0; q < rule.points.size(); ++q) {
                const Vec2 x = a + rule.points[q].x * (b - a);
                const double w = rule.weights[q] * fg.length * coef;
                normal_derivatives(space, c0, space.to_reference(c0, x), fg.normal, k, dn0);
                normal_derivatives(space, c1, space.to_reference(c1, x), fg.normal, k, dn1);
                std::fill(jump.begin(), jump.end(), 0.0);
                for (int i = 0; i < nloc; ++i) {
                    jump[i] += dn0[i];
                    jump[side1_pos[i]] -= dn1[i];
                }
                for (int i = 0; i < nu; ++i) {
                    const int ai = dofs.active_of_global[union_dofs[i]];
                    for (int j = 0; j < nu; ++j) {
                        const int aj = dofs.active_of_global[union_dofs[j]];
                        tg.emplace_back(ai, aj, w * jump[i] * jump[j]);
                    }
                }
            }
        }
    }
    SparseMatrix G;
    G.set_from_triplets(dofs.n_active(), dofs.n_active(), tg);
    return G;
}

SparseMatrix combine_bilinear(const StepOperators& ops, const FormParams& params) {
    SparseMatrix A = ops.mass.scaled(1.0 / params.dt);
    A.axpy(0.5, ops.stiffness);
    A.axpy(-0.5, ops.nitsche);
    A.axpy(params.gamma_D / params.h, ops.boundary_mass);
    A.axpy(params.gamma_g, ops.ghost);
    return A;
}

SparseMatrix assemble_bilinear(const ActiveMesh& active, const FESpace& space,
                               const FormParams& params, const MovingDomain& domain, double t) {
    return combine_bilinear(assemble_operators(active, space, domain, t), params);
}

std::vector<double> combine_rhs(const StepOperators& ops, const ActiveMesh& active,
                                const FESpace& space, const FormParams& params,
                                const MovingDomain& domain, double t, const FEFunction& u_prev,
                                const std::function<double(const Vec2&, double)>& f,
                                const std::function<double(const Vec2&, double)>& g_bc) {
    const int n = ops.dofs.n_active();
    const int nloc = space.dofs_per_cell();
    const int m = space.degree();
    const QuadRule& vol_rule = reference_rule(2 * m);
    const QuadRule& seg_rule = gauss_rule_1d(m + 1);
    const double t_prev = t - params.dt;

    // transfer contract: cells meeting Omega^n must not read zero-filled dofs
    for (int c : active.active_cells) {
        if (!ops.cell_reads_previous[c]) continue;
        const auto dofs = space.cell_dofs(c);
        for (int i = 0; i < nloc; ++i)
            if (u_prev.fresh_dofs[dofs[i]])
                throw std::logic_error("zero-filled transferred dof " + std::to_string(dofs[i]) +
                                       " read on cell " + std::to_string(c) +
                                       " meeting the current domain");
    }

    const std::vector<double> up = restrict_to_active(ops.dofs, u_prev.coeffs);
    std::vector<double> b = ops.mass.matvec(up);
    for (double& e : b) e /= params.dt;
    const std::vector<double> ku = ops.stiffness.matvec(up);
    const std::vector<double> nu = ops.nitsche.matvec(up);
    for (int i = 0; i < n; ++i) b[i] -= 0.5 * (ku[i] - nu[i]);

    for (int c : active.active_cells) {
        if (active.cell_class[c] == CellClass::DeltaStrip) continue;
        const auto geo = cell_cut_geometry(space.mesh(), domain, c, t);
        if (geo.interior_subtris.empty() && geo.boundary_segments.empty()) continue;
        const auto dofs = space.cell_dofs(c);

        for (const auto& tri : geo.interior_subtris) {
            const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
            const double jac = cross(e1, e2);
            for (size_t q = 0; q < vol_rule.points.size(); ++q) {
                const Vec2 x = tri[0] + vol_rule.points[q].x * e1 + vol_rule.points[q].y * e2;
                const double fmid = 0.5 * (f(x, t) + f(x, t_prev));
                const double w = vol_rule.weights[q] * jac * fmid;
                const auto eval = space.eval_basis(c, space.to_reference(c, x), 0);
                for (int i = 0; i < nloc; ++i)
                    b[ops.dofs.active_of_global[dofs[i]]] += w * eval.value[i];
            }
        }
        for (const auto& seg : geo.boundary_segments) {
            const double len = dist(seg.a, seg.b);
            for (size_t q = 0; q < seg_rule.points.size(); ++q) {
                const Vec2 x = seg.a + seg_rule.points[q].x * (seg.b - seg.a);
                const double w =
                    seg_rule.weights[q] * len * (params.gamma_D / params.h) * g_bc(x, t);
                const auto eval = space.eval_basis(c, space.to_reference(c, x), 0);
                for (int i = 0; i < nloc; ++i)
                    b[ops.dofs.active_of_global[dofs[i]]] += w * eval.value[i];
            }
        }
    }
    return b;
}

std::vector<double> assemble_rhs(const ActiveMesh& active, const FESpace& space,
                                 const FormParams& params, const MovingDomain& domain, double t,
                                 const FEFunction& u_prev,
                                 const std::function<double(const Vec2&, double)>& f,
                                 const std::function<double(const Vec2&, double)>& g_bc) {
    const auto ops = assemble_operators(active, space, domain, t);
    return combine_rhs(ops, active, space, params, domain, t, u_prev, f, g_bc);
}

double ghost_penalty_energy(const ActiveMesh& active, const FESpace& space,
                            const std::vector<double>& coeffs) {
    const BackgroundMesh& mesh = space.mesh();
    const int m = space.degree();
    const int nloc = space.dofs_per_cell();
    const QuadRule& rule = gauss_rule_1d(m + 1);
    const double h = mesh.h;

    double sum = 0.0;
    std::vector<double> dn0, dn1;
    for (int f : active.facets_ghost) {
        const Facet& fa = mesh.facets[f];
        const int c0 = fa.cells[0], c1 = fa.cells[1];
        const FacetGeometry fg = mesh.facet_geometry(f);
        const Vec2 a = mesh.vertices[fa.vertices[0]], b = mesh.vertices[fa.vertices[1]];
        const auto dofs0 = space.cell_dofs(c0);
        const auto dofs1 = space.cell_dofs(c1);

        for (int k = 1; k <= m; ++k) {
            const double kfac = (k == 1) ? 1.0 : 2.0;
            const double coef = std::pow(h, 2 * k - 1) / (kfac * kfac);
            for (size_t q = 0; q < rule.points.size(); ++q) {
                const Vec2 x = a + rule.points[q].x * (b - a);
                normal_derivatives(space, c0, space.to_reference(c0, x), fg.normal, k, dn0);
                normal_derivatives(space, c1, space.to_reference(c1, x), fg.normal, k, dn1);
                double side0 = 0.0, side1 = 0.0;
                for (int i = 0; i < nloc; ++i) {
                    side0 += coeffs[dofs0[i]] * dn0[i];
                    side1 += coeffs[dofs1[i]] * dn1[i];
                }
                const double jump = side0 - side1;
                sum += rule.weights[q] * fg.length * coef * jump * jump;
            }
        }
    }
    return sum;
}

double energy_squared(const ActiveMesh& active, const FESpace& space, const FormParams& params,
                      const MovingDomain& domain, double t, const FEFunction& u_n,
                      const FEFunction& u_prev) {
    const int m = space.degree();
    const QuadRule& vol_rule = reference_rule(2 * m);
    const QuadRule& seg_rule = gauss_rule_1d(m + 1);

    double grad_avg = 0.0, diff = 0.0, boundary = 0.0;
    for (int c : active.active_cells) {
        if (active.cell_class[c] == CellClass::DeltaStrip) continue;
        const auto geo = cell_cut_geometry(space.mesh(), domain, c, t);
        for (const auto& tri : geo.interior_subtris) {
            const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
            const double jac = cross(e1, e2);
            for (size_t q = 0; q < vol_rule.points.size(); ++q) {
                const Vec2 x = tri[0] + vol_rule.points[q].x * e1 + vol_rule.points[q].y * e2;
                const Vec2 ref = space.to_reference(c, x);
                const double w = vol_rule.weights[q] * jac;
                const Vec2 g = u_n.eval_grad(c, ref) + u_prev.eval_grad(c, ref);
                const double d = u_n.eval(c, ref) - u_prev.eval(c, ref);
                grad_avg += w * dot(g, g);
                diff += w * d * d;
            }
        }
        for (const auto& seg : geo.boundary_segments) {
            const double len = dist(seg.a, seg.b);
            for (size_t q = 0; q < seg_rule.points.size(); ++q) {
                const Vec2 x = seg.a + seg_rule.points[q].x * (seg.b - seg.a);
                const double v = u_n.eval(c, space.to_reference(c, x));
                boundary += seg_rule.weights[q] * len * v * v;
            }
        }
    }
    return 0.5 * grad_avg + diff / params.dt + (params.gamma_D / params.h) * boundary +
           params.gamma_g * ghost_penalty_energy(active, space, u_n.coeffs);
}

void dump_system(std::ostream& os, const SparseMatrix& A, const std::vector<double>& b) {
    os << "matrix " << A.rows() << " " << A.cols() << " " << A.nonzeros() << "\n";
    os.precision(17);
    for (int r = 0; r < A.rows(); ++r)
        A.for_each_in_row(r, [&](int c, double v) { os << r << " " << c << " " << v << "\n"; });
    os << "rhs " << b.size() << "\n";
    for (double e : b) os << e << "\n";
}

}  // namespace cutheat
