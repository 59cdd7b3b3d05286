#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "config.hpp"

namespace cutheat {

struct RunOptions {
    std::string output_dir;  // empty: write nothing
    bool write_vtk = false;
    bool quiet = true;
};

struct CellResult {
    int n = 0;
    double h = 0.0;   // grid label 1/n
    double dt = 0.0;
    bool ok = false;
    std::string error_tag;  // empty when ok
    ErrorReport errors;
    double max_residual = 0.0;
    int steps = 0;
    double runtime_sec = 0.0;
};

struct FitRow {
    std::string norm;      // end_time_l2 | l2l2 | l2h1av
    std::string protocol;  // temporal | spatial | diagonal
    double fixed = 0.0;    // the fixed h (temporal) or dt (spatial); c-bar for diagonal
    EocFit fit;
};

struct GridReport {
    ExperimentGrid grid;
    std::vector<CellResult> cells;  // for each n, for each dt (diagonal: matched pairs)
    std::vector<FitRow> fits;

    const CellResult* find(int n, double dt) const;
};

// Executes the study. Individual run failures are recorded per cell and the
// grid continues. Emits errors.csv, eoc.csv, summary.txt and a gnuplot script
// into options.output_dir when set.
GridReport run_grid(const ExperimentGrid& grid, const RunOptions& options = {});

// Single-run counterpart used by the command-line front end.
CellResult run_single(const RunConfig& config, const RunOptions& options = {});

void write_errors_csv(std::ostream& os, const GridReport& report);
void write_eoc_csv(std::ostream& os, const GridReport& report);
void write_summary(std::ostream& os, const GridReport& report);
void write_gnuplot_script(std::ostream& os, const GridReport& report);
std::string format_summary(const GridReport& report);

// Re-parses an errors.csv stream back into cell results (fits are not stored
// in that file). Used to verify the round trip.
std::vector<CellResult> parse_errors_csv(std::istream& is);

void write_report_files(const GridReport& report, const std::string& output_dir);

}  // namespace cutheat
