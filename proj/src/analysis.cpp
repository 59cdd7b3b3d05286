#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cutheat {

ErrorReport error_norms(const Trajectory& traj, const ManufacturedProblem& exact) {
    const FESpace& space = *traj.space;
    const BackgroundMesh& mesh = *traj.mesh;
    const int quad_degree = std::min(6, 2 * space.degree() + 2);
    const QuadRule& rule = reference_rule(quad_degree);
    const double dt = traj.config.dt;

    ErrorReport rep;
    double sum_l2 = 0.0, sum_h1 = 0.0;
    for (int k = 1; k <= traj.n_steps(); ++k) {
        const ActiveMesh& am = traj.active[k - 1];
        const double t = am.time, t_prev = t - dt;
        const FEFunction& uh = traj.solutions[k];
        const FEFunction& uh_prev = traj.solutions[k - 1];

        double e_l2 = 0.0, e_h1 = 0.0;
        for (int c : am.active_cells) {
            if (am.cell_class[c] == CellClass::DeltaStrip) continue;
            const auto geo = cell_cut_geometry(mesh, exact.domain, c, t);
            for (const auto& tri : geo.interior_subtris) {
                const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
                const double jac = cross(e1, e2);
                for (size_t q = 0; q < rule.points.size(); ++q) {
                    const Vec2 x = tri[0] + rule.points[q].x * e1 + rule.points[q].y * e2;
                    const Vec2 ref = space.to_reference(c, x);
                    const double w = rule.weights[q] * jac;
                    const double err = exact.u(x, t) - uh.eval(c, ref);
                    const Vec2 gerr_new = exact.grad_u(x, t) - uh.eval_grad(c, ref);
                    const Vec2 gerr_old = exact.grad_u(x, t_prev) - uh_prev.eval_grad(c, ref);
                    const Vec2 gsum = gerr_new + gerr_old;
                    e_l2 += w * err * err;
                    e_h1 += w * dot(gsum, gsum);
                }
            }
        }
        rep.per_step_l2.push_back(std::sqrt(e_l2));
        rep.per_step_h1av.push_back(std::sqrt(e_h1));
        sum_l2 += dt * e_l2;
        sum_h1 += dt * e_h1;
    }
    rep.end_time_l2 = rep.per_step_l2.empty() ? 0.0 : rep.per_step_l2.back();
    rep.l2l2 = std::sqrt(sum_l2);
    rep.l2h1av = std::sqrt(sum_h1);
    return rep;
}

namespace {

struct InnerFit {
    double offset = 0.0;
    double constant = 0.0;
    double rss = 0.0;
    bool clamped = false;
};

// linear least squares for (g, c) in g + c * x^p, with g clamped at 0
InnerFit inner_least_squares(const std::vector<std::pair<double, double>>& data, double p) {
    const int n = static_cast<int>(data.size());
    double sz = 0.0, szz = 0.0, sy = 0.0, szy = 0.0;
    for (const auto& [x, y] : data) {
        const double z = std::pow(x, p);
        sz += z;
        szz += z * z;
        sy += y;
        szy += z * y;
    }
    InnerFit fit;
    const double det = n * szz - sz * sz;
    if (std::abs(det) > 1e-300) {
        fit.offset = (sy * szz - sz * szy) / det;
        fit.constant = (n * szy - sz * sy) / det;
    } else {
        fit.offset = -1.0;  // force the clamped branch
    }
    if (fit.offset < 0.0) {
        fit.offset = 0.0;
        fit.constant = (szz > 0.0) ? szy / szz : 0.0;
        fit.clamped = true;
    }
    fit.rss = 0.0;
    for (const auto& [x, y] : data) {
        const double r = fit.offset + fit.constant * std::pow(x, p) - y;
        fit.rss += r * r;
    }
    return fit;
}

// asymptotic standard error of p from the linearized covariance at the optimum
double order_rel_std_err(const std::vector<std::pair<double, double>>& data, double p,
                         const InnerFit& fit) {
    const int n = static_cast<int>(data.size());
    const int npar = fit.clamped ? 2 : 3;
    if (n <= npar) return std::numeric_limits<double>::infinity();

    // columns of the jacobian: [1 (unless clamped)], x^p, c * x^p * ln x
    const int nc = npar;
    std::vector<std::vector<double>> J(n, std::vector<double>(nc));
    for (int i = 0; i < n; ++i) {
        const double x = data[i].first;
        const double z = std::pow(x, p);
        int col = 0;
        if (!fit.clamped) J[i][col++] = 1.0;
        J[i][col++] = z;
        J[i][col++] = fit.constant * z * std::log(x);
    }
    // normal matrix JtJ and its inverse's last diagonal entry via Gauss-Jordan
    std::vector<std::vector<double>> A(nc, std::vector<double>(2 * nc, 0.0));
    for (int r = 0; r < nc; ++r) {
        for (int c = 0; c < nc; ++c)
            for (int i = 0; i < n; ++i) A[r][c] += J[i][r] * J[i][c];
        A[r][nc + r] = 1.0;
    }
    for (int col = 0; col < nc; ++col) {
        int piv = col;
        for (int r = col + 1; r < nc; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-300) return std::numeric_limits<double>::infinity();
        std::swap(A[piv], A[col]);
        const double d = A[col][col];
        for (double& e : A[col]) e /= d;
        for (int r = 0; r < nc; ++r) {
            if (r == col) continue;
            const double f = A[r][col];
            for (int c = 0; c < 2 * nc; ++c) A[r][c] -= f * A[col][c];
        }
    }
    const double sigma2 = fit.rss / (n - npar);
    const double var_p = sigma2 * A[nc - 1][2 * nc - 1];
    if (!(var_p >= 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(var_p) / std::abs(p);
}

EocFit fit_offset_power(const std::vector<std::pair<double, double>>& data, FitProtocol protocol) {
    if (data.size() < 4)
        throw std::invalid_argument("offset power-law fit needs at least 4 data points");
    for (const auto& [x, y] : data) {
        if (x <= 0.0) throw std::invalid_argument("fit abscissae must be positive");
        (void)y;
    }

    auto rss_of = [&data](double p) { return inner_least_squares(data, p).rss; };

    // coarse scan, then golden-section refinement around the best bracket
    constexpr double p_lo = 0.5, p_hi = 5.0;
    constexpr int scan = 45;
    double best_p = p_lo, best_rss = rss_of(p_lo);
    for (int i = 1; i <= scan; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / scan;
        const double r = rss_of(p);
        if (r < best_rss) {
            best_rss = r;
            best_p = p;
        }
    }
    const double span = (p_hi - p_lo) / scan;
    double a = std::max(p_lo, best_p - span), b = std::min(p_hi, best_p + span);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = rss_of(c), fd = rss_of(d);
    while (b - a > 1e-4) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = rss_of(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = rss_of(d);
        }
    }
    const double p = 0.5 * (a + b);
    const InnerFit inner = inner_least_squares(data, p);

    EocFit fit;
    fit.protocol = protocol;
    fit.offset = inner.offset;
    fit.constant = inner.constant;
    fit.order = p;
    fit.rss = inner.rss;
    fit.rel_std_err = order_rel_std_err(data, p, inner);
    fit.usable = fit.rel_std_err <= 0.20;
    return fit;
}

}  // namespace

EocFit fit_temporal(const std::vector<std::pair<double, double>>& errors) {
    return fit_offset_power(errors, FitProtocol::Temporal);
}

EocFit fit_spatial(const std::vector<std::pair<double, double>>& errors) {
    return fit_offset_power(errors, FitProtocol::Spatial);
}

EocFit fit_diagonal(const std::vector<std::pair<double, double>>& errors) {
    if (errors.size() < 2) throw std::invalid_argument("diagonal fit needs at least 2 data points");
    const int n = static_cast<int>(errors.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : errors) {
        if (x <= 0.0 || y <= 0.0)
            throw std::invalid_argument("diagonal fit needs positive abscissae and errors");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, ryy = 0.0;
    for (const auto& [x, y] : errors) {
        const double lx = std::log(x) - mx, ly = std::log(y) - my;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    if (sxx <= 0.0) throw std::invalid_argument("diagonal fit needs distinct abscissae");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    for (const auto& [x, y] : errors) {
        const double r = intercept + slope * std::log(x) - std::log(y);
        ryy += r * r;
    }

    EocFit fit;
    fit.protocol = FitProtocol::Diagonal;
    fit.offset = 0.0;
    fit.constant = std::exp(intercept);
    fit.order = slope;
    fit.rss = ryy;
    if (n > 2) {
        const double se = std::sqrt(ryy / (n - 2) / sxx);
        fit.rel_std_err = se / std::abs(slope);
    } else {
        fit.rel_std_err = 0.0;  // two points: exact fit
    }
    fit.usable = std::isfinite(fit.order) && fit.rel_std_err <= 0.20;
    return fit;
}

std::string to_string(FitProtocol protocol) {
    switch (protocol) {
        case FitProtocol::Temporal: return "temporal";
        case FitProtocol::Spatial: return "spatial";
        case FitProtocol::Diagonal: return "diagonal";
    }
    return "unknown";
}

}  // namespace cutheat
