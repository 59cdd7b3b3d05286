#pragma once

#include <array>
#include <functional>
#include <vector>

#include "vec2.hpp"

namespace cutheat {

// Quadrature rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}
// (weights sum to 1/2) or on the reference segment [0,1] (weights sum to 1).
struct QuadRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int degree = 0;
};

// Triangle rule exact for all polynomials of total degree <= degree.
// All weights positive. Supported degrees: 1..6.
const QuadRule& reference_rule(int degree);

// Gauss-Legendre rule on [0,1] with npoints in 1..6, exact to degree 2*npoints-1.
const QuadRule& gauss_rule_1d(int npoints);

// Oriented piece of the interface inside one cell.
struct BoundarySegment {
    Vec2 a;
    Vec2 b;
    Vec2 normal;  // unit, from the phi<0 side to the phi>0 side
};

// Linear-reconstruction decomposition of one triangle against a level set:
// sub-triangles covering {phi_lin <= 0} and the straight interface pieces.
struct CutCellGeometry {
    std::vector<std::array<Vec2, 3>> interior_subtris;
    std::vector<BoundarySegment> boundary_segments;

    double interior_area() const {
        double a = 0.0;
        for (const auto& t : interior_subtris) a += triangle_area(t[0], t[1], t[2]);
        return a;
    }
};

// Marching-triangles case split on the vertex values of phi; phi <= 0 counts
// as inside. Intersection points by linear interpolation along the edges; a
// quad interior is split along its first-listed diagonal.
CutCellGeometry cut_triangle(const std::array<Vec2, 3>& vertices, const std::array<double, 3>& phi_vals);

// Integrates f over the sub-triangles with the given reference rule.
double integrate_subtris(const CutCellGeometry& geo, const QuadRule& rule,
                         const std::function<double(const Vec2&)>& f);

// Integrates f over the interface segments with the given 1d rule.
double integrate_segments(const CutCellGeometry& geo, const QuadRule& rule,
                          const std::function<double(const Vec2&, const Vec2&)>& f_point_normal);

}  // namespace cutheat
