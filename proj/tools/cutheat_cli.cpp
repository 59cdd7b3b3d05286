// Command-line front end for convergence studies; talks to the solver
// exclusively through the shared-library C interface.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cutheat/cutheat.h"

int main(int argc, char** argv) {
    CLI::App app{"Heat-equation solver on moving domains with convergence studies"};
    std::string config_path;
    std::string out_dir;
    bool vtk = false;
    bool quiet = false;
    app.add_option("--config", config_path, "path to a key=value config file")->required();
    app.add_option("--out", out_dir, "directory for errors.csv, eoc.csv, summary.txt");
    app.add_flag("--vtk", vtk, "write per-step solution fields (needs --out)");
    app.add_flag("--quiet", quiet, "suppress progress and summary output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    cutheat_config* config = nullptr;
    if (cutheat_config_parse_file(config_path.c_str(), &config) != CUTHEAT_OK) {
        std::fprintf(stderr, "config error: %s\n", cutheat_last_error());
        return 1;
    }

    cutheat_run_options options{};
    options.output_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    options.write_vtk = vtk ? 1 : 0;
    options.quiet = quiet ? 1 : 0;

    cutheat_report* report = nullptr;
    const cutheat_status status = cutheat_execute(config, &options, &report);
    if (status != CUTHEAT_OK && !report) {
        std::fprintf(stderr, "run error: %s\n", cutheat_last_error());
        cutheat_config_free(config);
        return status == CUTHEAT_ERR_CONFIG ? 1 : 2;
    }

    if (!quiet) {
        char* summary = nullptr;
        if (cutheat_report_summary(report, &summary) == CUTHEAT_OK) {
            std::fputs(summary, stdout);
            cutheat_string_free(summary);
        }
    }
    int exit_code = 0;
    if (status != CUTHEAT_OK) {
        std::fprintf(stderr, "run error: %s\n", cutheat_last_error());
        exit_code = 2;
    }

    cutheat_report_free(report);
    cutheat_config_free(config);
    return exit_code;
}
