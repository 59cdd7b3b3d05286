#include <doctest.h>

#include <cmath>
#include <set>

#include "forms.hpp"
#include "manufactured.hpp"

using namespace cutheat;

namespace {

double rnd01(unsigned& state) {
    state = state * 1664525u + 1013904223u;
    return (state >> 8) * (1.0 / 16777216.0);
}

// whole-box active mesh (level set identically -1)
ActiveMesh full_active(const BackgroundMesh& mesh) {
    MovingDomain all;
    all.phi = [](const Vec2&, double) { return -1.0; };
    return build_active_mesh(mesh, all, 0.0, 0.0);
}

MovingDomain everywhere_zero() {
    MovingDomain d;
    d.phi = [](const Vec2&, double) { return 0.0; };
    return d;
}

double quadratic_form(const SparseMatrix& A, const std::vector<double>& v) {
    const auto av = A.matvec(v);
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) sum += v[i] * av[i];
    return sum;
}

double entry(const SparseMatrix& A, int i, int j) {
    double value = 0.0;
    A.for_each_in_row(i, [&](int col, double v) {
        if (col == j) value = v;
    });
    return value;
}

}  // namespace

TEST_CASE("uncut 2-cell assembly matches the hand-assembled CN system") {
    // unit square split along the (0,0)-(1,1) diagonal:
    // vertices 0:(0,0) 1:(1,0) 2:(0,1) 3:(1,1); cells (0,1,3) and (0,3,2)
    const auto mesh = build_uniform_mesh({{0.0, 0.0}, {1.0, 1.0}}, 1);
    REQUIRE(mesh.vertices[0].x == 0.0);
    REQUIRE(mesh.vertices[3].x == 1.0);
    REQUIRE(mesh.vertices[3].y == 1.0);
    const FESpace space(mesh, 1);
    const auto active = full_active(mesh);
    MovingDomain all;
    all.phi = [](const Vec2&, double) { return -1.0; };

    const double dt = 0.01;
    FormParams params{1.0, 1e-3, dt, mesh.h};
    const auto ops = assemble_operators(active, space, all, 0.0);
    REQUIRE(ops.dofs.n_active() == 4);

    const double M[4][4] = {{1.0 / 6, 1.0 / 24, 1.0 / 24, 1.0 / 12},
                            {1.0 / 24, 1.0 / 12, 0.0, 1.0 / 24},
                            {1.0 / 24, 0.0, 1.0 / 12, 1.0 / 24},
                            {1.0 / 12, 1.0 / 24, 1.0 / 24, 1.0 / 6}};
    const double K[4][4] = {{1.0, -0.5, -0.5, 0.0},
                            {-0.5, 1.0, 0.0, -0.5},
                            {-0.5, 0.0, 1.0, -0.5},
                            {0.0, -0.5, -0.5, 1.0}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(entry(ops.mass, i, j) == doctest::Approx(M[i][j]).epsilon(1e-13));
            CHECK(entry(ops.stiffness, i, j) == doctest::Approx(K[i][j]).epsilon(1e-13));
        }
    }
    CHECK(ops.nitsche.nonzeros() == 0);
    CHECK(ops.boundary_mass.nonzeros() == 0);
    CHECK(ops.ghost.nonzeros() == 0);

    const auto A = combine_bilinear(ops, params);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(entry(A, i, j) ==
                  doctest::Approx(M[i][j] / dt + 0.5 * K[i][j]).epsilon(1e-13));
}

TEST_CASE("mass row sums integrate the basis; the total is the domain area") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 32);
    const FESpace space(mesh, 1);
    const double t = 1.0 / 50.0;
    const auto am = build_active_mesh(mesh, problem.domain, t, 0.08);
    const auto ops = assemble_operators(am, space, problem.domain, t);

    const std::vector<double> ones(ops.dofs.n_active(), 1.0);
    const auto row_sums = ops.mass.matvec(ones);
    double total = 0.0;
    for (double v : row_sums) total += v;
    const double area = integrate_cut_volume(am, mesh, problem.domain, t,
                                             [](const Vec2&) { return 1.0; });
    CHECK(total == doctest::Approx(area).epsilon(1e-12));

    // the right-hand side with f = 1 and zero data reproduces the row sums
    FEFunction zero;
    zero.space = &space;
    zero.coeffs.assign(space.n_dofs(), 0.0);
    zero.active_mask = space.active_dof_mask(am);
    zero.fresh_dofs.assign(space.n_dofs(), 0);
    FormParams params{1.0, 1e-3, t, mesh.h};
    const auto b = combine_rhs(ops, am, space, params, problem.domain, t, zero,
                               [](const Vec2&, double) { return 1.0; },
                               [](const Vec2&, double) { return 0.0; });
    for (int i = 0; i < ops.dofs.n_active(); ++i)
        CHECK(b[i] == doctest::Approx(row_sums[i]).epsilon(1e-12).scale(1e-6));

    // stiffness annihilates constants
    const auto k1 = ops.stiffness.matvec(ones);
    for (double v : k1) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("zero data gives a zero right-hand side") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 16);
    const FESpace space(mesh, 1);
    const double t = 0.02;
    const auto am = build_active_mesh(mesh, problem.domain, t, 0.08);
    const auto ops = assemble_operators(am, space, problem.domain, t);
    FEFunction zero;
    zero.space = &space;
    zero.coeffs.assign(space.n_dofs(), 0.0);
    zero.active_mask = space.active_dof_mask(am);
    zero.fresh_dofs.assign(space.n_dofs(), 0);
    FormParams params{1.0, 1e-3, t, mesh.h};
    const auto b = combine_rhs(ops, am, space, params, problem.domain, t, zero,
                               [](const Vec2&, double) { return 0.0; },
                               [](const Vec2&, double) { return 0.0; });
    for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("ghost penalty: single-facet hand value on the 2-cell mesh") {
    const auto mesh = build_uniform_mesh({{0.0, 0.0}, {1.0, 1.0}}, 1);
    const FESpace space(mesh, 1);
    // level set 0 everywhere: active cells are inside but not strictly, so the
    // diagonal facet lands in the stabilized set
    const auto am = build_active_mesh(mesh, everywhere_zero(), 0.0, 0.0);
    REQUIRE(am.facets_ghost.size() == 1);
    const auto dofs = build_dof_map(am, space);
    const auto G = assemble_ghost(am, space, dofs);

    // hat at an off-diagonal vertex: gradient (±1, ∓1) on one cell, 0 on the
    // other; jump of the normal derivative is sqrt(2); value h |e| jump^2 = 4
    std::vector<double> v(4, 0.0);
    v[1] = 1.0;  // vertex (1,0), only in the first cell
    CHECK(quadratic_form(G, v) == doctest::Approx(4.0).epsilon(1e-13));
    std::vector<double> w(4, 0.0);
    w[2] = 1.0;  // vertex (0,1), only in the second cell
    CHECK(quadratic_form(G, w) == doctest::Approx(4.0).epsilon(1e-13));

    // functional route agrees with the matrix route
    std::vector<double> coeffs(4, 0.0);
    coeffs[1] = 1.0;
    CHECK(ghost_penalty_energy(am, space, coeffs) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("ghost penalty is symmetric and consistent for global polynomials") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 16);
    const double t = 1.0 / 50.0;
    const auto am = build_active_mesh(mesh, problem.domain, t, 0.08);

    for (int degree : {1, 2}) {
        CAPTURE(degree);
        const FESpace space(mesh, degree);
        const auto dofs = build_dof_map(am, space);
        const auto G = assemble_ghost(am, space, dofs);
        CHECK(G.max_abs_asymmetry() <= 1e-14);

        unsigned state = 31u * degree;
        for (int trial = 0; trial < 5; ++trial) {
            // random polynomial of the space's degree
            const double a0 = rnd01(state) - 0.5, a1 = rnd01(state) - 0.5,
                         a2 = rnd01(state) - 0.5, a3 = rnd01(state) - 0.5,
                         a4 = rnd01(state) - 0.5, a5 = rnd01(state) - 0.5;
            auto poly = [&](const Vec2& x) {
                double v = a0 + a1 * x.x + a2 * x.y;
                if (degree == 2) v += a3 * x.x * x.x + a4 * x.x * x.y + a5 * x.y * x.y;
                return v;
            };
            const auto fn = interpolate(space, am, poly);
            CHECK(ghost_penalty_energy(am, space, fn.coeffs) <= 1e-20);

            // matrix and functional routes agree on generic vectors
            std::vector<double> v(dofs.n_active());
            for (double& e : v) e = rnd01(state) - 0.5;
            const auto vg = scatter_to_global(dofs, v, space.n_dofs());
            CHECK(quadratic_form(G, v) ==
                  doctest::Approx(ghost_penalty_energy(am, space, vg)).epsilon(1e-10));
        }
    }
}

TEST_CASE("coercivity: vAv positive for random active vectors") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 32);
    const double dt = 1.0 / 50.0;
    const auto am = build_active_mesh(mesh, problem.domain, dt, 4.0 * dt);
    for (int degree : {1, 2}) {
        CAPTURE(degree);
        const FESpace space(mesh, degree);
        FormParams params{10.0, 1e-3, dt, mesh.h};
        const auto A = assemble_bilinear(am, space, params, problem.domain, dt);
        unsigned state = 100u + degree;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> v(A.rows());
            for (double& e : v) e = rnd01(state) - 0.5;
            CHECK(quadratic_form(A, v) > 0.0);
        }
    }
}

TEST_CASE("CN step reproduces stationary polynomial data") {
    const auto problem = example_traveling_circle();
    const double dt = 1.0 / 50.0;

    SUBCASE("constants on the uncut box") {
        const auto square = example_static_square();
        const auto mesh = build_uniform_mesh(square.background_box, 8);
        const FESpace space(mesh, 1);
        const auto am = full_active(mesh);
        const auto ops = assemble_operators(am, space, square.domain, dt);
        FormParams params{1.0, 1e-3, dt, mesh.h};
        const auto prev = interpolate(space, am, [](const Vec2&) { return 3.25; });
        const auto A = combine_bilinear(ops, params);
        const auto b = combine_rhs(ops, am, space, params, square.domain, dt, prev,
                                   [](const Vec2&, double) { return 0.0; },
                                   [](const Vec2&, double) { return 0.0; });
        const auto x = solve(A, b, 1e-12, 20);
        for (double v : x) CHECK(v == doctest::Approx(3.25).epsilon(1e-10));
    }

    SUBCASE("degree-m polynomials on the cut circle geometry") {
        for (int degree : {1, 2}) {
            CAPTURE(degree);
            const auto mesh = build_uniform_mesh(problem.background_box, 16);
            const FESpace space(mesh, degree);
            const auto am = build_active_mesh(mesh, problem.domain, dt, 4.0 * dt);
            const auto ops = assemble_operators(am, space, problem.domain, dt);
            FormParams params{degree == 1 ? 1.0 : 10.0, 1e-3, dt, mesh.h};

            auto poly = [degree](const Vec2& x) {
                return degree == 1 ? (0.3 + 1.2 * x.x - 0.8 * x.y)
                                   : (0.3 + 1.2 * x.x - 0.8 * x.y + 0.9 * x.x * x.x -
                                      0.5 * x.x * x.y + 0.4 * x.y * x.y);
            };
            // stationary data: f = -laplace(p), boundary data p itself
            const double lap = degree == 1 ? 0.0 : (2.0 * 0.9 + 2.0 * 0.4);
            const auto prev = interpolate(space, am, poly);
            const auto A = combine_bilinear(ops, params);
            const auto b = combine_rhs(ops, am, space, params, problem.domain, dt, prev,
                                       [lap](const Vec2&, double) { return -lap; },
                                       [&poly](const Vec2& x, double) { return poly(x); });
            const auto x = solve(A, b, 1e-12, 20);
            for (int a = 0; a < ops.dofs.n_active(); ++a) {
                const double expected = prev.coeffs[ops.dofs.global_of_active[a]];
                CHECK(x[a] == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("matrix couples only dofs sharing an active cell or a ghost facet") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 16);
    const FESpace space(mesh, 2);
    const double dt = 1.0 / 50.0;
    const auto am = build_active_mesh(mesh, problem.domain, dt, 4.0 * dt);
    const auto ops = assemble_operators(am, space, problem.domain, dt);
    FormParams params{10.0, 1e-3, dt, mesh.h};
    const auto A = combine_bilinear(ops, params);

    // sparsity bound
    CHECK(A.nonzeros() <= 30 * ops.dofs.n_active());

    // allowed couplings: same active cell, or the two cells of a ghost facet
    std::vector<std::set<int>> allowed(space.n_dofs());
    auto join = [&](int c0, int c1) {
        for (int i = 0; i < space.dofs_per_cell(); ++i)
            for (int j = 0; j < space.dofs_per_cell(); ++j) {
                allowed[space.cell_dofs(c0)[i]].insert(space.cell_dofs(c1)[j]);
                allowed[space.cell_dofs(c1)[i]].insert(space.cell_dofs(c0)[j]);
            }
    };
    for (int c : am.active_cells) join(c, c);
    for (int f : am.facets_ghost) join(mesh.facets[f].cells[0], mesh.facets[f].cells[1]);

    for (int r = 0; r < A.rows(); ++r) {
        const int gi = ops.dofs.global_of_active[r];
        A.for_each_in_row(r, [&](int col, double v) {
            if (v == 0.0) return;
            CHECK(allowed[gi].count(ops.dofs.global_of_active[col]) == 1);
        });
    }
}

TEST_CASE("step energy") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 16);
    const FESpace space(mesh, 1);
    const double t = 1.0 / 50.0;
    const auto am = build_active_mesh(mesh, problem.domain, t, 0.08);
    FormParams params{1.0, 1e-3, 1.0 / 50.0, mesh.h};

    FEFunction zero;
    zero.space = &space;
    zero.coeffs.assign(space.n_dofs(), 0.0);
    zero.active_mask = space.active_dof_mask(am);
    zero.fresh_dofs.assign(space.n_dofs(), 0);

    SUBCASE("zero functions have zero energy") {
        CHECK(energy_squared(am, space, params, problem.domain, t, zero, zero) == 0.0);
    }

    SUBCASE("constants: only the boundary penalty term survives") {
        const double c = 2.5;
        const auto fn = interpolate(space, am, [c](const Vec2&) { return c; });
        const double boundary_len = integrate_cut_boundary(
            am, mesh, problem.domain, t, [](const Vec2&, const Vec2&) { return 1.0; });
        const double expected = (params.gamma_D / params.h) * c * c * boundary_len;
        CHECK(energy_squared(am, space, params, problem.domain, t, fn, fn) ==
              doctest::Approx(expected).epsilon(1e-10));
    }

    SUBCASE("energy is nonnegative for random coefficients") {
        unsigned state = 11u;
        for (int trial = 0; trial < 100; ++trial) {
            FEFunction a = zero, b = zero;
            for (int dof = 0; dof < space.n_dofs(); ++dof) {
                if (!a.active_mask[dof]) continue;
                a.coeffs[dof] = rnd01(state) - 0.5;
                b.coeffs[dof] = rnd01(state) - 0.5;
            }
            CHECK(energy_squared(am, space, params, problem.domain, t, a, b) >= 0.0);
        }
    }
}

TEST_CASE("reading a zero-filled transferred dof on a domain cell is fatal") {
    const auto problem = example_traveling_circle();
    const auto mesh = build_uniform_mesh(problem.background_box, 16);
    const FESpace space(mesh, 1);
    const double dt = 1.0 / 50.0;
    const auto am1 = build_active_mesh(mesh, problem.domain, dt, 4.0 * dt, nullptr, 1);
    const auto am2 = build_active_mesh(mesh, problem.domain, 2 * dt, 4.0 * dt, &am1, 2);
    const auto u1 = interpolate(space, am1, [&](const Vec2& x) { return problem.u(x, dt); });
    FEFunction moved = transfer(u1, am2);

    const auto ops = assemble_operators(am2, space, problem.domain, 2 * dt);
    FormParams params{1.0, 1e-3, dt, mesh.h};
    CHECK_NOTHROW(combine_rhs(ops, am2, space, params, problem.domain, 2 * dt, moved, problem.f,
                              problem.g_bc));

    // poison a dof that a domain cell reads
    int poisoned = -1;
    for (int c : am2.active_cells) {
        if (am2.cell_class[c] != CellClass::Inside) continue;
        poisoned = space.cell_dofs(c)[0];
        break;
    }
    REQUIRE(poisoned >= 0);
    moved.fresh_dofs[poisoned] = 1;
    CHECK_THROWS_AS(combine_rhs(ops, am2, space, params, problem.domain, 2 * dt, moved, problem.f,
                                problem.g_bc),
                    std::logic_error);
}
