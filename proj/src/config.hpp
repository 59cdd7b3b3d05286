#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "timestepper.hpp"

namespace cutheat {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
          line(line) {}
    int line;
};

// A convergence study: every (n, dt) pair in full-grid mode, matched pairs in
// diagonal mode (dt proportional to h).
struct ExperimentGrid {
    std::string problem_id = "traveling_circle";
    double r2 = 0.09;
    int degree = 1;
    bool diagonal = false;
    std::vector<int> n_values;        // ascending (h = 1/n strictly decreasing)
    std::vector<double> dt_values;    // strictly decreasing
    double t_max = 0.0;
    double gamma_D = -1.0;            // negative: default by degree
    double gamma_g = 1e-3;
    double delta_factor = 4.0;        // delta = delta_factor * dt
    double solver_tol = 1e-10;
    int solver_max_iter = 20;

    RunConfig cell_config(int n, double dt) const;
};

using ParsedConfig = std::variant<RunConfig, ExperimentGrid>;

// Flat key=value format, one pair per line, '#' comments. Single-run configs
// take: problem, n, dt, tmax [, degree, gamma_d, gamma_g, delta, solver_tol,
// r2]. Grid configs set mode=grid or mode=diagonal and use n_list/dt_list.
// Fractions like 1/800 are accepted for real values.
ParsedConfig parse_config(const std::string& text);

ParsedConfig parse_config_file(const std::string& path);

}  // namespace cutheat
