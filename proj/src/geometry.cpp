#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cutheat {

std::array<Vec2, 7> cell_samples(const BackgroundMesh& mesh, int cell) {
    const auto v = mesh.cell_vertices(cell);
    return {v[0],
            v[1],
            v[2],
            0.5 * (v[0] + v[1]),
            0.5 * (v[1] + v[2]),
            0.5 * (v[2] + v[0]),
            (v[0] + v[1] + v[2]) / 3.0};
}

std::vector<CellClass> classify_cells(const BackgroundMesh& mesh, const MovingDomain& domain,
                                      double t, double delta) {
    if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    std::vector<CellClass> classes(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const auto samples = cell_samples(mesh, c);
        int n_neg = 0;
        double min_phi = std::numeric_limits<double>::infinity();
        for (const Vec2& x : samples) {
            const double p = domain.phi(x, t);
            if (p <= 0.0) ++n_neg;  // zero counts as inside
            min_phi = std::min(min_phi, p);
        }
        if (n_neg == 7)
            classes[c] = CellClass::Inside;
        else if (n_neg > 0)
            classes[c] = CellClass::Cut;
        else
            classes[c] = (min_phi <= delta) ? CellClass::DeltaStrip : CellClass::Outside;
    }
    return classes;
}

ActiveMesh build_active_mesh(const BackgroundMesh& mesh, const MovingDomain& domain, double t,
                             double delta, const ActiveMesh* prev, int step) {
    ActiveMesh am;
    am.step = step;
    am.time = t;
    am.delta = delta;
    am.cell_class = classify_cells(mesh, domain, t, delta);
    am.strictly_inside.assign(mesh.n_cells(), 0);

    for (int c = 0; c < mesh.n_cells(); ++c) {
        if (am.cell_class[c] == CellClass::Inside) {
            bool strict = true;
            for (const Vec2& x : cell_samples(mesh, c))
                if (domain.phi(x, t) >= 0.0) strict = false;
            am.strictly_inside[c] = strict ? 1 : 0;
        }
        if (am.cell_active(c)) am.active_cells.push_back(c);
    }

    // Coverage check: the scheme reads u^{n-1} on every cell meeting Omega^n,
    // so those cells must have carried dofs in the previous step.
    if (prev) {
        for (int c = 0; c < mesh.n_cells(); ++c) {
            const CellClass cl = am.cell_class[c];
            if ((cl == CellClass::Inside || cl == CellClass::Cut) && !prev->cell_active(c))
                throw ExtensionCoverageError(step, c);
        }
    }

    for (int f = 0; f < mesh.n_facets(); ++f) {
        const Facet& fa = mesh.facets[f];
        if (fa.cells[1] < 0) continue;
        const int c0 = fa.cells[0], c1 = fa.cells[1];
        if (!am.cell_active(c0) || !am.cell_active(c1)) continue;
        am.facets_interior.push_back(f);
        const bool touches_cut =
            am.cell_class[c0] == CellClass::Cut || am.cell_class[c1] == CellClass::Cut;
        if (touches_cut) {
            am.facets_cut.push_back(f);
        } else if (am.strictly_inside[c0] && am.strictly_inside[c1]) {
            // interior facets carry no stabilization
        } else {
            am.facets_ext.push_back(f);
        }
    }
    am.facets_ghost = am.facets_cut;
    am.facets_ghost.insert(am.facets_ghost.end(), am.facets_ext.begin(), am.facets_ext.end());
    std::sort(am.facets_ghost.begin(), am.facets_ghost.end());

    if (prev) {
        for (int c : am.active_cells) {
            // a sample inside Omega^n but outside Omega^{n-1} puts the cell
            // into the strip S^{n,n-1}
            for (const Vec2& x : cell_samples(mesh, c)) {
                if (domain.phi(x, t) <= 0.0 && domain.phi(x, prev->time) > 0.0) {
                    am.strip_cells.push_back(c);
                    break;
                }
            }
        }
    }
    return am;
}

double delta_default(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    return 4.0 * dt;
}

CutCellGeometry cell_cut_geometry(const BackgroundMesh& mesh, const MovingDomain& domain, int cell,
                                  double t) {
    const auto v = mesh.cell_vertices(cell);
    return cut_triangle(v, {domain.phi(v[0], t), domain.phi(v[1], t), domain.phi(v[2], t)});
}

double integrate_cut_volume(const ActiveMesh& active, const BackgroundMesh& mesh,
                            const MovingDomain& domain, double t,
                            const std::function<double(const Vec2&)>& f, int quad_degree) {
    const QuadRule& rule = reference_rule(quad_degree);
    double sum = 0.0;
    for (int c : active.active_cells) {
        if (active.cell_class[c] == CellClass::DeltaStrip) continue;
        const auto geo = cell_cut_geometry(mesh, domain, c, t);
        sum += integrate_subtris(geo, rule, f);
    }
    return sum;
}

double integrate_cut_boundary(const ActiveMesh& active, const BackgroundMesh& mesh,
                              const MovingDomain& domain, double t,
                              const std::function<double(const Vec2&, const Vec2&)>& f,
                              int gauss_points) {
    const QuadRule& rule = gauss_rule_1d(gauss_points);
    double sum = 0.0;
    for (int c : active.active_cells) {
        if (active.cell_class[c] != CellClass::Cut) continue;
        const auto geo = cell_cut_geometry(mesh, domain, c, t);
        sum += integrate_segments(geo, rule, f);
    }
    return sum;
}

}  // namespace cutheat
