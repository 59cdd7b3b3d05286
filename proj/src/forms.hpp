#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "fespace.hpp"
#include "geometry.hpp"
#include "linalg.hpp"

namespace cutheat {

struct FormParams {
    double gamma_D = 1.0;   // Nitsche/Dirichlet penalty weight, scaled by 1/h
    double gamma_g = 1e-3;  // ghost penalty weight
    double dt = 0.0;
    double h = 0.0;         // background mesh parameter used in all weights
};

// Global-to-active dof correspondence for one step's linear system.
struct DofMap {
    std::vector<int> active_of_global;  // -1 where inactive
    std::vector<int> global_of_active;

    int n_active() const { return static_cast<int>(global_of_active.size()); }
};

DofMap build_dof_map(const ActiveMesh& active, const FESpace& space);

// The step-n operators restricted to active dofs:
//   mass          (u, v)_{Omega^n}
//   stiffness     (grad u, grad v)_{Omega^n}
//   nitsche       (dn u, v)_{dOmega^n}     (one-sided, not symmetrized)
//   boundary_mass (u, v)_{dOmega^n}
//   ghost         sum over ghost facets of the normal-derivative jump terms
struct StepOperators {
    DofMap dofs;
    SparseMatrix mass, stiffness, nitsche, boundary_mass, ghost;
    std::vector<char> cell_reads_previous;  // active cells with nonempty Omega^n part
};

StepOperators assemble_operators(const ActiveMesh& active, const FESpace& space,
                                 const MovingDomain& domain, double t);

// G_ij = sum_{e in F_g} sum_{k=1..m} h^{2k-1}/(k!)^2 int_e [[dn^k phi_j]] [[dn^k phi_i]] ds
SparseMatrix assemble_ghost(const ActiveMesh& active, const FESpace& space, const DofMap& dofs);

// A = (1/dt) M + 1/2 K - 1/2 N + (gamma_D/h) B + gamma_g G
SparseMatrix assemble_bilinear(const ActiveMesh& active, const FESpace& space,
                               const FormParams& params, const MovingDomain& domain, double t);
SparseMatrix combine_bilinear(const StepOperators& ops, const FormParams& params);

// b = (1/dt) M u_prev - 1/2 (K - N) u_prev + (f^{n-1/2}, v)_{Omega^n}
//     + (gamma_D/h) (g_bc(., t_n), v)_{dOmega^n}
// Verifies that no zero-filled transferred dof is read on cells meeting
// Omega^n (throws std::logic_error on violation).
std::vector<double> assemble_rhs(const ActiveMesh& active, const FESpace& space,
                                 const FormParams& params, const MovingDomain& domain, double t,
                                 const FEFunction& u_prev,
                                 const std::function<double(const Vec2&, double)>& f,
                                 const std::function<double(const Vec2&, double)>& g_bc);
std::vector<double> combine_rhs(const StepOperators& ops, const ActiveMesh& active,
                                const FESpace& space, const FormParams& params,
                                const MovingDomain& domain, double t, const FEFunction& u_prev,
                                const std::function<double(const Vec2&, double)>& f,
                                const std::function<double(const Vec2&, double)>& g_bc);

// g_h^n(u, u) evaluated as a quadratic form on the function itself. For
// interpolants of smooth functions the jumps cancel before squaring, so the
// result is accurate near zero where the assembled-matrix route is not.
double ghost_penalty_energy(const ActiveMesh& active, const FESpace& space,
                            const std::vector<double>& global_coeffs);

// Squared discrete step energy:
//   1/2 ||grad u_n + grad u_prev||^2_{Omega^n} + (1/dt) ||u_n - u_prev||^2_{Omega^n}
//   + (gamma_D/h) ||u_n||^2_{dOmega^n} + gamma_g g_h^n(u_n, u_n)
double energy_squared(const ActiveMesh& active, const FESpace& space, const FormParams& params,
                      const MovingDomain& domain, double t, const FEFunction& u_n,
                      const FEFunction& u_prev);

// Plain ASCII dump (triplets + vector) for offline debugging.
void dump_system(std::ostream& os, const SparseMatrix& A, const std::vector<double>& b);

std::vector<double> restrict_to_active(const DofMap& dofs, const std::vector<double>& global);
std::vector<double> scatter_to_global(const DofMap& dofs, const std::vector<double>& active,
                                      int n_global);

}  // namespace cutheat
