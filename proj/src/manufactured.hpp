#pragma once

#include <functional>
#include <string>

#include "geometry.hpp"

namespace cutheat {

// A problem with a globally defined closed-form exact solution. Because u,
// grad u and f are valid on the whole background box, the extension of data
// from one step's domain to the next is just evaluation.
struct ManufacturedProblem {
    std::string id;
    std::function<double(const Vec2&, double)> u;
    std::function<Vec2(const Vec2&, double)> grad_u;
    std::function<double(const Vec2&, double)> f;  // u_t - laplace(u)
    std::function<double(const Vec2&, double)> g_bc;
    MovingDomain domain;
    Rect background_box;
    double t_max = 0.0;
};

// Circle of radius sqrt(r2) traveling with velocity (1,0) inside the unit
// square, u = exp(-4 pi^2 t) cos(2 pi x) cos(2 pi y). The solution does not
// solve the source-free heat equation; f is derived as u_t - laplace(u),
// which gives f = 4 pi^2 u.
ManufacturedProblem example_traveling_circle(double r2 = 0.09);

// Whole background box as a static domain (phi = -1 everywhere),
// u = exp(-2 pi^2 t) sin(pi x) sin(pi y), f = 0, u = 0 on the box boundary.
ManufacturedProblem example_static_square();

// Lookup by id ("traveling_circle" or "static_square").
ManufacturedProblem problem_by_id(const std::string& id, double r2 = 0.09);

}  // namespace cutheat
