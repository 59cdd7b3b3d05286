#include "manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cutheat {

namespace {
constexpr double pi = std::numbers::pi;
}

ManufacturedProblem example_traveling_circle(double r2) {
    if (r2 <= 0.0) throw std::invalid_argument("r2 must be positive");
    const double t_max = 0.1;
    // circle center starts at (0.5, 0.5) and moves right with unit speed
    if (0.5 + t_max + std::sqrt(r2) >= 1.0)
        throw std::invalid_argument(
            "circle with r2 = " + std::to_string(r2) +
            " leaves the unit background box over the time interval; require "
            "0.5 + t_max + sqrt(r2) < 1");

    ManufacturedProblem p;
    p.id = "traveling_circle";
    p.background_box = {{0.0, 0.0}, {1.0, 1.0}};
    p.t_max = t_max;
    p.domain.description = "circle of radius " + std::to_string(std::sqrt(r2)) +
                           " traveling with velocity (1,0)";
    p.domain.w_max = 1.0;
    p.domain.phi = [r2](const Vec2& x, double t) {
        const double dx = x.x - 0.5 - t, dy = x.y - 0.5;
        return dx * dx + dy * dy - r2;
    };
    p.u = [](const Vec2& x, double t) {
        return std::exp(-4.0 * pi * pi * t) * std::cos(2.0 * pi * x.x) * std::cos(2.0 * pi * x.y);
    };
    p.grad_u = [](const Vec2& x, double t) {
        const double a = std::exp(-4.0 * pi * pi * t);
        return Vec2{-2.0 * pi * a * std::sin(2.0 * pi * x.x) * std::cos(2.0 * pi * x.y),
                    -2.0 * pi * a * std::cos(2.0 * pi * x.x) * std::sin(2.0 * pi * x.y)};
    };
    // u_t = -4 pi^2 u and laplace(u) = -8 pi^2 u, hence f = u_t - laplace(u) = 4 pi^2 u
    p.f = [u = p.u](const Vec2& x, double t) { return 4.0 * pi * pi * u(x, t); };
    p.g_bc = p.u;
    return p;
}

ManufacturedProblem example_static_square() {
    ManufacturedProblem p;
    p.id = "static_square";
    p.background_box = {{0.0, 0.0}, {1.0, 1.0}};
    p.t_max = 0.1;
    p.domain.description = "static unit square (level set -1 everywhere)";
    p.domain.w_max = 0.0;
    p.domain.phi = [](const Vec2&, double) { return -1.0; };
    p.u = [](const Vec2& x, double t) {
        return std::exp(-2.0 * pi * pi * t) * std::sin(pi * x.x) * std::sin(pi * x.y);
    };
    p.grad_u = [](const Vec2& x, double t) {
        const double a = std::exp(-2.0 * pi * pi * t);
        return Vec2{pi * a * std::cos(pi * x.x) * std::sin(pi * x.y),
                    pi * a * std::sin(pi * x.x) * std::cos(pi * x.y)};
    };
    // u_t = -2 pi^2 u = laplace(u), so the source vanishes
    p.f = [](const Vec2&, double) { return 0.0; };
    p.g_bc = [](const Vec2&, double) { return 0.0; };
    return p;
}

ManufacturedProblem problem_by_id(const std::string& id, double r2) {
    if (id == "traveling_circle") return example_traveling_circle(r2);
    if (id == "static_square") return example_static_square();
    throw std::invalid_argument("unknown problem id: " + id);
}

}  // namespace cutheat
