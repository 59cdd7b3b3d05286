#pragma once

#include <string>
#include <utility>
#include <vector>

#include "timestepper.hpp"

namespace cutheat {

struct ErrorReport {
    double end_time_l2 = 0.0;           // ||e^N|| on Omega^N
    double l2l2 = 0.0;                  // (dt sum_k ||e^k||^2)^{1/2}
    double l2h1av = 0.0;                // (dt sum_k ||grad e^k + grad e^{k-1}||^2)^{1/2}
    std::vector<double> per_step_l2;    // k = 1..N
    std::vector<double> per_step_h1av;
};

// Error norms against the exact solution, integrated with cut quadrature of
// degree 2m+2 on each step's reconstructed domain.
ErrorReport error_norms(const Trajectory& trajectory, const ManufacturedProblem& exact);

enum class FitProtocol { Temporal, Spatial, Diagonal };

// Result of fitting error = offset + constant * x^order (offset fixed to 0
// for the diagonal protocol, which is a log-log linear regression).
struct EocFit {
    FitProtocol protocol = FitProtocol::Temporal;
    double offset = 0.0;
    double constant = 0.0;
    double order = 0.0;
    double rss = 0.0;          // residual sum of squares of the fit
    double rel_std_err = 0.0;  // asymptotic standard error of order, relative
    bool usable = false;       // rel_std_err <= 20%
};

// Least-squares fit of g_fixed + c * dt^p against (dt, error) pairs at fixed
// h. Outer golden-section search over p in [0.5, 5], inner linear
// least squares for (g_fixed, c) with g_fixed clamped at 0. Needs >= 4 points.
EocFit fit_temporal(const std::vector<std::pair<double, double>>& errors);

// Same model against (h, error) pairs at fixed dt.
EocFit fit_spatial(const std::vector<std::pair<double, double>>& errors);

// Two-parameter log-log regression for (h, error) pairs with dt proportional
// to h. Needs >= 2 points with positive errors.
EocFit fit_diagonal(const std::vector<std::pair<double, double>>& errors);

std::string to_string(FitProtocol protocol);

}  // namespace cutheat
