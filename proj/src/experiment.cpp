#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vtk_io.hpp"

namespace cutheat {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5e", v);
    return buf;
}

std::string run_label(int n, double dt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "n%d_dt%g", n, dt);
    return buf;
}

CellResult run_one(const RunConfig& config, const RunOptions& options) {
    CellResult cell;
    cell.n = config.n;
    cell.h = 1.0 / config.n;
    cell.dt = config.dt;

    StepCallback on_step = nullptr;
    std::string vtk_dir;
    if (options.write_vtk && !options.output_dir.empty()) {
        vtk_dir = options.output_dir + "/vtk/" + run_label(config.n, config.dt);
        std::filesystem::create_directories(vtk_dir);
        on_step = [vtk_dir](int step, const ActiveMesh& am, const FESpace& space,
                            const FEFunction& u) {
            char name[64];
            std::snprintf(name, sizeof(name), "/step_%04d.vtk", step);
            std::ofstream os(vtk_dir + name);
            write_solution_vtk(os, space, am, u, "u");
        };
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const ManufacturedProblem problem = problem_by_id(config.problem_id, config.r2);
        const Trajectory traj = run(config, problem, on_step);
        cell.errors = error_norms(traj, problem);
        cell.steps = traj.n_steps();
        for (const StepRecord& s : traj.steps)
            cell.max_residual = std::max(cell.max_residual, s.residual);
        cell.ok = true;
    } catch (const ExtensionCoverageError& e) {
        cell.error_tag = "extension_coverage";
        (void)e;
    } catch (const SolverDivergence& e) {
        cell.error_tag = "solver_divergence";
        (void)e;
    } catch (const std::exception& e) {
        cell.error_tag = std::string("error: ") + e.what();
        for (char& ch : cell.error_tag)
            if (ch == ',' || ch == '\n') ch = ';';
    }
    cell.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cell;
}

double norm_value(const CellResult& c, const std::string& norm) {
    if (norm == "end_time_l2") return c.errors.end_time_l2;
    if (norm == "l2l2") return c.errors.l2l2;
    return c.errors.l2h1av;
}

const std::vector<std::string> kNorms = {"end_time_l2", "l2l2", "l2h1av"};

void add_fits(GridReport& report) {
    const ExperimentGrid& g = report.grid;
    if (g.diagonal) {
        for (const auto& norm : kNorms) {
            std::vector<std::pair<double, double>> data;
            for (const CellResult& c : report.cells)
                if (c.ok && norm_value(c, norm) > 0.0) data.emplace_back(c.h, norm_value(c, norm));
            if (data.size() < 2) continue;
            FitRow row;
            row.norm = norm;
            row.protocol = to_string(FitProtocol::Diagonal);
            row.fixed = report.cells.front().dt * report.cells.front().n;  // c-bar = dt/h
            row.fit = fit_diagonal(data);
            report.fits.push_back(row);
        }
        return;
    }

    // temporal fits: fixed h, varying dt
    for (int n : g.n_values) {
        std::vector<std::vector<std::pair<double, double>>> data(kNorms.size());
        for (double dt : g.dt_values)
            if (const CellResult* c = report.find(n, dt); c && c->ok)
                for (size_t k = 0; k < kNorms.size(); ++k)
                    data[k].emplace_back(dt, norm_value(*c, kNorms[k]));
        for (size_t k = 0; k < kNorms.size(); ++k) {
            if (data[k].size() < 4) continue;
            FitRow row;
            row.norm = kNorms[k];
            row.protocol = to_string(FitProtocol::Temporal);
            row.fixed = 1.0 / n;
            row.fit = fit_temporal(data[k]);
            report.fits.push_back(row);
        }
    }
    // spatial fits: fixed dt, varying h
    for (double dt : g.dt_values) {
        std::vector<std::vector<std::pair<double, double>>> data(kNorms.size());
        for (int n : g.n_values)
            if (const CellResult* c = report.find(n, dt); c && c->ok)
                for (size_t k = 0; k < kNorms.size(); ++k)
                    data[k].emplace_back(1.0 / n, norm_value(*c, kNorms[k]));
        for (size_t k = 0; k < kNorms.size(); ++k) {
            if (data[k].size() < 4) continue;
            FitRow row;
            row.norm = kNorms[k];
            row.protocol = to_string(FitProtocol::Spatial);
            row.fixed = dt;
            row.fit = fit_spatial(data[k]);
            report.fits.push_back(row);
        }
    }
    // diagonal fits where the grid contains refinement paths with constant dt/h
    const int rows = static_cast<int>(g.n_values.size());
    const int cols = static_cast<int>(g.dt_values.size());
    for (int offset = -(rows - 1); offset < cols; ++offset) {
        double cbar = 0.0;
        bool constant_ratio = true;
        std::vector<std::vector<std::pair<double, double>>> data(kNorms.size());
        for (int i = 0; i < rows; ++i) {
            const int j = i + offset;
            if (j < 0 || j >= cols) continue;
            const double ratio = g.dt_values[j] * g.n_values[i];
            if (cbar == 0.0)
                cbar = ratio;
            else if (std::abs(ratio - cbar) > 1e-9 * cbar)
                constant_ratio = false;
            if (const CellResult* c = report.find(g.n_values[i], g.dt_values[j]); c && c->ok)
                for (size_t k = 0; k < kNorms.size(); ++k)
                    data[k].emplace_back(c->h, norm_value(*c, kNorms[k]));
        }
        if (!constant_ratio) continue;
        for (size_t k = 0; k < kNorms.size(); ++k) {
            if (data[k].size() < 2) continue;
            bool positive = true;
            for (const auto& [h, e] : data[k]) positive = positive && e > 0.0;
            if (!positive) continue;
            FitRow row;
            row.norm = kNorms[k];
            row.protocol = to_string(FitProtocol::Diagonal);
            row.fixed = cbar;
            row.fit = fit_diagonal(data[k]);
            report.fits.push_back(row);
        }
    }
}

}  // namespace

const CellResult* GridReport::find(int n, double dt) const {
    for (const CellResult& c : cells)
        if (c.n == n && c.dt == dt) return &c;
    return nullptr;
}

GridReport run_grid(const ExperimentGrid& grid, const RunOptions& options) {
    GridReport report;
    report.grid = grid;
    if (grid.diagonal) {
        for (size_t i = 0; i < grid.n_values.size(); ++i) {
            if (!options.quiet)
                std::cout << "run " << run_label(grid.n_values[i], grid.dt_values[i]) << "\n";
            report.cells.push_back(
                run_one(grid.cell_config(grid.n_values[i], grid.dt_values[i]), options));
        }
    } else {
        for (int n : grid.n_values) {
            for (double dt : grid.dt_values) {
                if (!options.quiet) std::cout << "run " << run_label(n, dt) << "\n";
                report.cells.push_back(run_one(grid.cell_config(n, dt), options));
            }
        }
    }
    add_fits(report);
    if (!options.output_dir.empty()) write_report_files(report, options.output_dir);
    return report;
}

CellResult run_single(const RunConfig& config, const RunOptions& options) {
    CellResult cell = run_one(config, options);
    if (!options.output_dir.empty()) {
        GridReport report;
        report.grid.problem_id = config.problem_id;
        report.grid.r2 = config.r2;
        report.grid.degree = config.degree;
        report.grid.n_values = {config.n};
        report.grid.dt_values = {config.dt};
        report.grid.t_max = config.t_max;
        report.grid.gamma_D = config.gamma_D;
        report.grid.gamma_g = config.gamma_g;
        report.grid.solver_tol = config.solver_tol;
        report.cells = {cell};
        write_report_files(report, options.output_dir);
    }
    return cell;
}

void write_errors_csv(std::ostream& os, const GridReport& report) {
    os << "h,dt,end_time_l2,l2l2,l2h1av,steps,max_residual,status,runtime_sec\n";
    for (const CellResult& c : report.cells) {
        os << sci(c.h) << "," << sci(c.dt) << "," << sci(c.errors.end_time_l2) << ","
           << sci(c.errors.l2l2) << "," << sci(c.errors.l2h1av) << "," << c.steps << ","
           << sci(c.max_residual) << "," << (c.ok ? "ok" : c.error_tag) << ","
           << sci(c.runtime_sec) << "\n";
    }
}

std::vector<CellResult> parse_errors_csv(std::istream& is) {
    std::vector<CellResult> cells;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        CellResult c;
        auto next = [&]() {
            std::getline(ss, field, ',');
            return field;
        };
        c.h = std::stod(next());
        c.n = static_cast<int>(std::llround(1.0 / c.h));
        c.dt = std::stod(next());
        c.errors.end_time_l2 = std::stod(next());
        c.errors.l2l2 = std::stod(next());
        c.errors.l2h1av = std::stod(next());
        c.steps = std::stoi(next());
        c.max_residual = std::stod(next());
        const std::string status = next();
        c.ok = (status == "ok");
        if (!c.ok) c.error_tag = status;
        c.runtime_sec = std::stod(next());
        cells.push_back(c);
    }
    return cells;
}

void write_eoc_csv(std::ostream& os, const GridReport& report) {
    os << "norm,protocol,fixed,order,constant,offset,rss,rel_std_err,usable\n";
    for (const FitRow& row : report.fits) {
        os << row.norm << "," << row.protocol << "," << sci(row.fixed) << ","
           << sci(row.fit.order) << "," << sci(row.fit.constant) << "," << sci(row.fit.offset)
           << "," << sci(row.fit.rss) << "," << sci(row.fit.rel_std_err) << ","
           << (row.fit.usable ? "yes" : "no") << "\n";
    }
}

namespace {

std::string order_or_dash(const GridReport& report, const std::string& norm,
                          const std::string& protocol, double fixed) {
    for (const FitRow& row : report.fits) {
        if (row.norm != norm || row.protocol != protocol) continue;
        if (std::abs(row.fixed - fixed) > 1e-12 * std::abs(fixed)) continue;
        if (!row.fit.usable) return "-";
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", row.fit.order);
        return buf;
    }
    return "-";
}

}  // namespace

void write_summary(std::ostream& os, const GridReport& report) {
    const ExperimentGrid& g = report.grid;
    os << "problem " << g.problem_id << ", P" << g.degree << " elements\n";
    const std::vector<std::pair<std::string, std::string>> titles = {
        {"end_time_l2", "end-time L2 error"},
        {"l2l2", "L2(L2) error"},
        {"l2h1av", "L2(H1_av) error"}};
    for (const auto& [norm, title] : titles) {
        os << "\n" << title << "\n";
        os << "h \\ dt";
        for (double dt : g.dt_values) os << "  " << sci(dt);
        os << "  eoc_dt\n";
        for (int n : g.n_values) {
            os << "1/" << n;
            for (double dt : g.dt_values) {
                const CellResult* c = report.find(n, dt);
                if (c && c->ok)
                    os << "  " << sci(norm_value(*c, norm));
                else if (c)
                    os << "  [" << c->error_tag << "]";
                else
                    os << "  -";
            }
            os << "  " << order_or_dash(report, norm, "temporal", 1.0 / n) << "\n";
        }
        os << "eoc_h";
        for (double dt : g.dt_values) os << "  " << order_or_dash(report, norm, "spatial", dt);
        os << "\n";
        for (const FitRow& row : report.fits) {
            if (row.norm != norm || row.protocol != "diagonal") continue;
            os << "eoc_diag (dt = " << row.fixed << " h): "
               << order_or_dash(report, norm, "diagonal", row.fixed) << "\n";
        }
    }
}

std::string format_summary(const GridReport& report) {
    std::ostringstream os;
    write_summary(os, report);
    return os.str();
}

void write_gnuplot_script(std::ostream& os, const GridReport& report) {
    const ExperimentGrid& g = report.grid;
    os << "# gnuplot script for the convergence study (reads errors.csv)\n";
    os << "set datafile separator ','\n";
    os << "set logscale xy\n";
    os << "set key left top\n";
    os << "set xlabel 'dt'\n";
    os << "set ylabel 'error'\n";
    os << "set terminal pngcairo size 900,600\n";
    const std::vector<std::pair<std::string, int>> norms = {
        {"end_time_l2", 3}, {"l2l2", 4}, {"l2h1av", 5}};
    for (const auto& [norm, col] : norms) {
        os << "set output '" << norm << ".png'\n";
        os << "plot ";
        bool first = true;
        for (int n : g.n_values) {
            if (!first) os << ", \\\n     ";
            first = false;
            os << "'errors.csv' using 2:($1==" << sci(1.0 / n) << "?$" << col
               << ":1/0) with linespoints title 'h=1/" << n << "'";
        }
        os << "\n";
    }
}

void write_report_files(const GridReport& report, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    {
        std::ofstream os(output_dir + "/errors.csv");
        write_errors_csv(os, report);
    }
    {
        std::ofstream os(output_dir + "/eoc.csv");
        write_eoc_csv(os, report);
    }
    {
        std::ofstream os(output_dir + "/summary.txt");
        write_summary(os, report);
    }
    {
        std::ofstream os(output_dir + "/plot.gnuplot");
        write_gnuplot_script(os, report);
    }
}

}  // namespace cutheat
