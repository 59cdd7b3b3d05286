#include "cutheat/cutheat.h"

#include <cstring>
#include <memory>
#include <string>

#include "config.hpp"
#include "experiment.hpp"

using namespace cutheat;

struct cutheat_config {
    ParsedConfig parsed;
};

struct cutheat_report {
    GridReport report;
    bool single_failed = false;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

cutheat_status fail(cutheat_status status, const std::string& message) {
    set_error(message);
    return status;
}

RunOptions to_options(const cutheat_run_options* options) {
    RunOptions out;
    if (options) {
        out.output_dir = options->output_dir ? options->output_dir : "";
        out.write_vtk = options->write_vtk != 0;
        out.quiet = options->quiet != 0;
    }
    return out;
}

}  // namespace

extern "C" {

const char* cutheat_version(void) { return "1.0.0"; }

const char* cutheat_last_error(void) { return g_last_error.c_str(); }

cutheat_status cutheat_config_parse_string(const char* text, cutheat_config** out) {
    if (!text || !out) return fail(CUTHEAT_ERR_INVALID, "null argument");
    *out = nullptr;
    try {
        auto* config = new cutheat_config{parse_config(text)};
        *out = config;
        set_error("");
        return CUTHEAT_OK;
    } catch (const std::exception& e) {
        return fail(CUTHEAT_ERR_CONFIG, e.what());
    }
}

cutheat_status cutheat_config_parse_file(const char* path, cutheat_config** out) {
    if (!path || !out) return fail(CUTHEAT_ERR_INVALID, "null argument");
    *out = nullptr;
    try {
        auto* config = new cutheat_config{parse_config_file(path)};
        *out = config;
        set_error("");
        return CUTHEAT_OK;
    } catch (const std::exception& e) {
        return fail(CUTHEAT_ERR_CONFIG, e.what());
    }
}

void cutheat_config_free(cutheat_config* config) { delete config; }

int cutheat_config_is_grid(const cutheat_config* config) {
    return config && std::holds_alternative<ExperimentGrid>(config->parsed) ? 1 : 0;
}

cutheat_status cutheat_execute(const cutheat_config* config, const cutheat_run_options* options,
                               cutheat_report** out) {
    if (!config || !out) return fail(CUTHEAT_ERR_INVALID, "null argument");
    *out = nullptr;
    try {
        const RunOptions opts = to_options(options);
        auto report = std::make_unique<cutheat_report>();
        if (const auto* grid = std::get_if<ExperimentGrid>(&config->parsed)) {
            report->report = run_grid(*grid, opts);
            bool any_ok = false;
            for (const CellResult& c : report->report.cells) any_ok = any_ok || c.ok;
            if (!any_ok && !report->report.cells.empty()) {
                set_error("all grid cells failed: " + report->report.cells.front().error_tag);
                *out = report.release();
                return CUTHEAT_ERR_RUN;
            }
        } else {
            const RunConfig& single = std::get<RunConfig>(config->parsed);
            const CellResult cell = run_single(single, opts);
            report->report.grid.problem_id = single.problem_id;
            report->report.grid.r2 = single.r2;
            report->report.grid.degree = single.degree;
            report->report.grid.n_values = {single.n};
            report->report.grid.dt_values = {single.dt};
            report->report.grid.t_max = single.t_max;
            report->report.cells = {cell};
            if (!cell.ok) {
                report->single_failed = true;
                set_error("run failed: " + cell.error_tag);
                *out = report.release();
                return CUTHEAT_ERR_RUN;
            }
        }
        *out = report.release();
        set_error("");
        return CUTHEAT_OK;
    } catch (const ConfigError& e) {
        return fail(CUTHEAT_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(CUTHEAT_ERR_RUN, e.what());
    }
}

void cutheat_report_free(cutheat_report* report) { delete report; }

size_t cutheat_report_row_count(const cutheat_report* report) {
    return report ? report->report.cells.size() : 0;
}

cutheat_status cutheat_report_row(const cutheat_report* report, size_t index, double* h,
                                  double* dt, double* end_time_l2, double* l2l2, double* l2h1av) {
    if (!report || index >= report->report.cells.size())
        return fail(CUTHEAT_ERR_INVALID, "row index out of range");
    const CellResult& c = report->report.cells[index];
    if (h) *h = c.h;
    if (dt) *dt = c.dt;
    if (end_time_l2) *end_time_l2 = c.errors.end_time_l2;
    if (l2l2) *l2l2 = c.errors.l2l2;
    if (l2h1av) *l2h1av = c.errors.l2h1av;
    return CUTHEAT_OK;
}

const char* cutheat_report_row_status(const cutheat_report* report, size_t index) {
    if (!report || index >= report->report.cells.size()) return nullptr;
    const CellResult& c = report->report.cells[index];
    return c.ok ? "ok" : c.error_tag.c_str();
}

size_t cutheat_report_fit_count(const cutheat_report* report) {
    return report ? report->report.fits.size() : 0;
}

cutheat_status cutheat_report_fit(const cutheat_report* report, size_t index, const char** norm,
                                  const char** protocol, double* order, int* usable) {
    if (!report || index >= report->report.fits.size())
        return fail(CUTHEAT_ERR_INVALID, "fit index out of range");
    const FitRow& row = report->report.fits[index];
    if (norm) *norm = row.norm.c_str();
    if (protocol) *protocol = row.protocol.c_str();
    if (order) *order = row.fit.order;
    if (usable) *usable = row.fit.usable ? 1 : 0;
    return CUTHEAT_OK;
}

cutheat_status cutheat_report_summary(const cutheat_report* report, char** out_text) {
    if (!report || !out_text) return fail(CUTHEAT_ERR_INVALID, "null argument");
    const std::string text = format_summary(report->report);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
    return CUTHEAT_OK;
}

void cutheat_string_free(char* text) { delete[] text; }

cutheat_status cutheat_report_write(const cutheat_report* report, const char* output_dir) {
    if (!report || !output_dir) return fail(CUTHEAT_ERR_INVALID, "null argument");
    try {
        write_report_files(report->report, output_dir);
        return CUTHEAT_OK;
    } catch (const std::exception& e) {
        return fail(CUTHEAT_ERR_RUN, e.what());
    }
}

}  // extern "C"
