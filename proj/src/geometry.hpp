#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mesh.hpp"
#include "quadrature.hpp"

namespace cutheat {

// Moving domain Omega(t) = {x : phi(x,t) <= 0} described by a level set.
struct MovingDomain {
    std::function<double(const Vec2&, double)> phi;
    double w_max = 0.0;  // maximal normal boundary speed
    std::string description;
};

enum class CellClass : unsigned char {
    Inside,       // all samples of phi <= 0
    Cut,          // samples of both signs
    DeltaStrip,   // all samples > 0, min sample <= delta
    Outside,
};

// Raised when a cell needed by the current step was not active in the
// previous step, i.e. delta is too small for the chosen time step.
class ExtensionCoverageError : public std::runtime_error {
public:
    ExtensionCoverageError(int step, int cell)
        : std::runtime_error("extension coverage violated at step " + std::to_string(step) +
                             ", cell " + std::to_string(cell) +
                             ": increase delta or reduce the time step"),
          step(step),
          cell(cell) {}
    int step;
    int cell;
};

// Per-step view of the background mesh: cell classification against
// Omega(t_n) and its delta-neighborhood, plus the stabilized facet sets.
struct ActiveMesh {
    int step = 0;
    double time = 0.0;
    double delta = 0.0;
    std::vector<CellClass> cell_class;
    std::vector<char> strictly_inside;  // all 7 samples strictly negative
    std::vector<int> active_cells;      // class != Outside, ascending
    std::vector<int> facets_interior;   // facets with both incident cells active
    std::vector<int> facets_cut;        // touching a Cut cell
    std::vector<int> facets_ext;        // remaining strip facets
    std::vector<int> facets_ghost;      // facets_cut + facets_ext, ascending
    std::vector<int> strip_cells;       // cells meeting Omega^n \ Omega^{n-1} (needs prev)

    bool cell_active(int c) const { return cell_class[c] != CellClass::Outside; }
};

// 7-point sample set used for classification: vertices, edge midpoints, centroid.
std::array<Vec2, 7> cell_samples(const BackgroundMesh& mesh, int cell);

std::vector<CellClass> classify_cells(const BackgroundMesh& mesh, const MovingDomain& domain,
                                      double t, double delta);

// Builds the facet sets of the active triangulation. When prev is given,
// verifies that every cell meeting Omega(t) was active in prev (throws
// ExtensionCoverageError otherwise) and records the strip cells.
ActiveMesh build_active_mesh(const BackgroundMesh& mesh, const MovingDomain& domain, double t,
                             double delta, const ActiveMesh* prev = nullptr, int step = 0);

// Default delta-neighborhood width, 4*dt.
double delta_default(double dt);

// Linear-reconstruction geometry of one cell at time t. Cells without a
// sign change come back as either the whole triangle or empty.
CutCellGeometry cell_cut_geometry(const BackgroundMesh& mesh, const MovingDomain& domain, int cell,
                                  double t);

// Integral of f over the reconstructed Omega_h(t) restricted to active cells.
double integrate_cut_volume(const ActiveMesh& active, const BackgroundMesh& mesh,
                            const MovingDomain& domain, double t,
                            const std::function<double(const Vec2&)>& f, int quad_degree = 4);

// Integral of f over the reconstructed interface.
double integrate_cut_boundary(const ActiveMesh& active, const BackgroundMesh& mesh,
                              const MovingDomain& domain, double t,
                              const std::function<double(const Vec2&, const Vec2&)>& f,
                              int gauss_points = 3);

}  // namespace cutheat
