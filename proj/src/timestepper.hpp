#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fespace.hpp"
#include "forms.hpp"
#include "manufactured.hpp"

namespace cutheat {

struct RunConfig {
    std::string problem_id = "traveling_circle";
    double r2 = 0.09;           // traveling-circle level-set parameter
    int n = 32;                 // subdivisions per axis of the background box
    double dt = 0.0;
    double t_max = 0.0;
    int degree = 1;
    double gamma_D = -1.0;      // negative: default by degree (1 for P1, 10 for P2)
    double gamma_g = 1e-3;
    double delta = -1.0;        // negative: delta_default(dt)
    double solver_tol = 1e-10;
    int solver_max_iter = 20;

    double resolved_gamma_D() const { return gamma_D >= 0.0 ? gamma_D : (degree == 1 ? 1.0 : 10.0); }
    double resolved_delta() const { return delta >= 0.0 ? delta : delta_default(dt); }
};

struct StepRecord {
    int step = 0;
    double time = 0.0;
    double residual = 0.0;
    double energy_sq = 0.0;
    double l2_norm = 0.0;  // ||u_h^n|| on Omega^n
    double max_abs_coeff = 0.0;
    int active_cells = 0;
    int active_dofs = 0;
    int strip_cells = 0;
};

struct Trajectory {
    RunConfig config;
    std::shared_ptr<const BackgroundMesh> mesh;
    std::shared_ptr<const FESpace> space;
    std::vector<FEFunction> solutions;  // u_h^0 .. u_h^N
    std::vector<ActiveMesh> active;     // steps 1..N
    std::vector<StepRecord> steps;      // steps 1..N
    bool cfl_satisfied = true;          // dt <= h^2
    double energy_sum = 0.0;            // dt * sum of energy_sq

    int n_steps() const { return static_cast<int>(steps.size()); }
};

// u_h^0: nodal interpolation of u0 on the step-1 active triangulation.
FEFunction initial_condition(const FESpace& space, const ActiveMesh& active_1,
                             const std::function<double(const Vec2&)>& u0);

using StepCallback =
    std::function<void(int step, const ActiveMesh&, const FESpace&, const FEFunction&)>;

// Runs the full scheme: per-step active mesh, transfer, assembly, solve.
// Throws ExtensionCoverageError or SolverDivergence with the failing step in
// the record trail.
Trajectory run(const RunConfig& config, const ManufacturedProblem& problem,
               const StepCallback& on_step = nullptr);

// Convenience: builds the problem from config.problem_id.
Trajectory run(const RunConfig& config, const StepCallback& on_step = nullptr);

}  // namespace cutheat
