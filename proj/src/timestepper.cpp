#include "timestepper.hpp"

#include <cmath>
#include <stdexcept>

namespace cutheat {

FEFunction initial_condition(const FESpace& space, const ActiveMesh& active_1,
                             const std::function<double(const Vec2&)>& u0) {
    return interpolate(space, active_1, u0);
}

namespace {

int step_count(const RunConfig& c) {
    if (c.dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (c.t_max <= 0.0) throw std::invalid_argument("t_max must be positive");
    const double ratio = c.t_max / c.dt;
    const int n = std::max(1, static_cast<int>(std::llround(ratio)));
    if (std::abs(ratio - n) > 0.5) throw std::invalid_argument("t_max must be a multiple of dt");
    return n;
}

double cut_l2_norm(const ActiveMesh& am, const FESpace& space, const MovingDomain& domain,
                   double t, const FEFunction& u) {
    const QuadRule& rule = reference_rule(2 * space.degree());
    double sum = 0.0;
    for (int c : am.active_cells) {
        if (am.cell_class[c] == CellClass::DeltaStrip) continue;
        const auto geo = cell_cut_geometry(space.mesh(), domain, c, t);
        for (const auto& tri : geo.interior_subtris) {
            const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
            const double jac = cross(e1, e2);
            for (size_t q = 0; q < rule.points.size(); ++q) {
                const Vec2 x = tri[0] + rule.points[q].x * e1 + rule.points[q].y * e2;
                const double v = u.eval(c, space.to_reference(c, x));
                sum += rule.weights[q] * jac * v * v;
            }
        }
    }
    return std::sqrt(sum);
}

}  // namespace

Trajectory run(const RunConfig& config, const ManufacturedProblem& problem,
               const StepCallback& on_step) {
    const int N = step_count(config);
    const double delta = config.resolved_delta();
    if (delta < problem.domain.w_max * config.dt)
        throw std::invalid_argument("delta must be at least w_max * dt");

    Trajectory traj;
    traj.config = config;
    traj.mesh = std::make_shared<const BackgroundMesh>(
        build_uniform_mesh(problem.background_box, config.n));
    traj.space = std::make_shared<const FESpace>(*traj.mesh, config.degree);
    const BackgroundMesh& mesh = *traj.mesh;
    const FESpace& space = *traj.space;

    FormParams params;
    params.gamma_D = config.resolved_gamma_D();
    params.gamma_g = config.gamma_g;
    params.dt = config.dt;
    params.h = mesh.h;
    traj.cfl_satisfied = config.dt <= mesh.h * mesh.h;

    traj.solutions.reserve(N + 1);
    traj.active.reserve(N);
    traj.steps.reserve(N);

    for (int n = 1; n <= N; ++n) {
        const double t = n * config.dt;
        const ActiveMesh* prev = (n >= 2) ? &traj.active.back() : nullptr;
        ActiveMesh am = build_active_mesh(mesh, problem.domain, t, delta, prev, n);

        FEFunction u_prev;
        if (n == 1) {
            traj.solutions.push_back(
                initial_condition(space, am, [&](const Vec2& x) { return problem.u(x, 0.0); }));
            u_prev = traj.solutions[0];
        } else {
            u_prev = transfer(traj.solutions.back(), am);
        }

        const auto ops = assemble_operators(am, space, problem.domain, t);
        const SparseMatrix A = combine_bilinear(ops, params);
        const std::vector<double> b = combine_rhs(ops, am, space, params, problem.domain, t,
                                                  u_prev, problem.f, problem.g_bc);
        double residual = 0.0;
        std::vector<double> x;
        try {
            x = solve(A, b, config.solver_tol, config.solver_max_iter, &residual);
        } catch (const SolverDivergence& e) {
            throw SolverDivergence(e.residual, config.solver_tol, n);
        }

        FEFunction u_n;
        u_n.space = &space;
        u_n.coeffs = scatter_to_global(ops.dofs, x, space.n_dofs());
        u_n.active_mask = space.active_dof_mask(am);
        u_n.fresh_dofs.assign(space.n_dofs(), 0);

        StepRecord rec;
        rec.step = n;
        rec.time = t;
        rec.residual = residual;
        rec.energy_sq = energy_squared(am, space, params, problem.domain, t, u_n, u_prev);
        rec.l2_norm = cut_l2_norm(am, space, problem.domain, t, u_n);
        rec.active_cells = static_cast<int>(am.active_cells.size());
        rec.active_dofs = ops.dofs.n_active();
        rec.strip_cells = static_cast<int>(am.strip_cells.size());
        for (double v : u_n.coeffs) rec.max_abs_coeff = std::max(rec.max_abs_coeff, std::abs(v));

        traj.active.push_back(std::move(am));
        traj.solutions.push_back(std::move(u_n));
        traj.steps.push_back(rec);
        traj.energy_sum += config.dt * rec.energy_sq;

        if (on_step) on_step(n, traj.active.back(), space, traj.solutions.back());
    }
    return traj;
}

Trajectory run(const RunConfig& config, const StepCallback& on_step) {
    return run(config, problem_by_id(config.problem_id, config.r2), on_step);
}

}  // namespace cutheat
