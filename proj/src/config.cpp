#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cutheat {

RunConfig ExperimentGrid::cell_config(int n, double dt) const {
    RunConfig c;
    c.problem_id = problem_id;
    c.r2 = r2;
    c.n = n;
    c.dt = dt;
    c.t_max = t_max;
    c.degree = degree;
    c.gamma_D = gamma_D;
    c.gamma_g = gamma_g;
    c.delta = delta_factor * dt;
    c.solver_tol = solver_tol;
    c.solver_max_iter = solver_max_iter;
    return c;
}

namespace {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw, int line) {
    const std::string s = trim(raw);
    const auto slash = s.find('/');
    try {
        size_t pos = 0;
        if (slash != std::string::npos) {
            const double num = std::stod(s.substr(0, slash), &pos);
            if (trim(s.substr(0, slash)).size() != pos) throw std::invalid_argument(s);
            size_t pos2 = 0;
            const std::string den_str = s.substr(slash + 1);
            const double den = std::stod(den_str, &pos2);
            if (trim(den_str).size() != pos2 || den == 0.0) throw std::invalid_argument(s);
            return num / den;
        }
        const double v = std::stod(s, &pos);
        if (s.size() != pos) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected a real number, got '" + s + "'", line);
    }
}

int parse_int(const std::string& raw, int line) {
    const std::string s = trim(raw);
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (s.size() != pos) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + s + "'", line);
    }
}

template <typename T>
std::vector<T> parse_list(const std::string& raw, int line, T (*parse)(const std::string&, int)) {
    std::vector<T> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse(item, line));
    if (out.empty()) throw ConfigError("empty list", line);
    return out;
}

class Entries {
public:
    explicit Entries(const std::string& text) {
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected key = value, got '" + line + "'", lineno);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", lineno);
            if (map_.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
            map_[key] = Entry{value, lineno};
        }
    }

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    Entry& require(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError("missing required key '" + key + "'");
        it->second.used = true;
        return it->second;
    }

    const Entry* optional(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : map_)
            if (!entry.used) throw ConfigError("unknown key '" + key + "'", entry.line);
    }

private:
    std::map<std::string, Entry> map_;
};

void read_common(Entries& e, std::string& problem, double& r2, int& degree, double& gamma_D,
                 double& gamma_g, double& solver_tol, int& solver_max_iter) {
    problem = e.require("problem").value;
    if (problem != "traveling_circle" && problem != "static_square")
        throw ConfigError("unknown problem '" + problem + "'", e.require("problem").line);
    if (const Entry* x = e.optional("r2")) r2 = parse_real(x->value, x->line);
    if (const Entry* x = e.optional("degree")) {
        degree = parse_int(x->value, x->line);
        if (degree != 1 && degree != 2) throw ConfigError("degree must be 1 or 2", x->line);
    }
    if (const Entry* x = e.optional("gamma_d")) {
        gamma_D = parse_real(x->value, x->line);
        if (gamma_D <= 0.0) throw ConfigError("gamma_d must be positive", x->line);
    }
    if (const Entry* x = e.optional("gamma_g")) {
        gamma_g = parse_real(x->value, x->line);
        if (gamma_g <= 0.0) throw ConfigError("gamma_g must be positive", x->line);
    }
    if (const Entry* x = e.optional("solver_tol")) {
        solver_tol = parse_real(x->value, x->line);
        if (solver_tol <= 0.0) throw ConfigError("solver_tol must be positive", x->line);
    }
    if (const Entry* x = e.optional("solver_max_iter"))
        solver_max_iter = parse_int(x->value, x->line);
}

double read_tmax(Entries& e) {
    Entry& x = e.require("tmax");
    const double v = parse_real(x.value, x.line);
    if (v <= 0.0) throw ConfigError("tmax must be positive", x.line);
    return v;
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
    Entries entries(text);
    std::string mode = "single";
    if (const Entry* x = entries.optional("mode")) {
        mode = x->value;
        if (mode != "single" && mode != "grid" && mode != "diagonal")
            throw ConfigError("mode must be single, grid or diagonal", x->line);
    }

    if (mode == "single") {
        RunConfig c;
        read_common(entries, c.problem_id, c.r2, c.degree, c.gamma_D, c.gamma_g, c.solver_tol,
                    c.solver_max_iter);
        {
            Entry& x = entries.require("n");
            c.n = parse_int(x.value, x.line);
            if (c.n < 1) throw ConfigError("n must be >= 1", x.line);
        }
        {
            Entry& x = entries.require("dt");
            c.dt = parse_real(x.value, x.line);
            if (c.dt <= 0.0) throw ConfigError("dt must be positive", x.line);
        }
        c.t_max = read_tmax(entries);
        if (const Entry* x = entries.optional("delta")) {
            c.delta = parse_real(x->value, x->line);
            if (c.delta < 0.0) throw ConfigError("delta must be >= 0", x->line);
        }
        entries.reject_unused();
        return c;
    }

    ExperimentGrid g;
    g.diagonal = (mode == "diagonal");
    read_common(entries, g.problem_id, g.r2, g.degree, g.gamma_D, g.gamma_g, g.solver_tol,
                g.solver_max_iter);
    {
        Entry& x = entries.require("n_list");
        g.n_values = parse_list<int>(x.value, x.line, parse_int);
        for (int n : g.n_values)
            if (n < 1) throw ConfigError("n values must be >= 1", x.line);
        for (size_t i = 1; i < g.n_values.size(); ++i)
            if (g.n_values[i] <= g.n_values[i - 1])
                throw ConfigError("n_list must be strictly increasing (h strictly decreasing)",
                                  x.line);
    }
    {
        Entry& x = entries.require("dt_list");
        g.dt_values = parse_list<double>(x.value, x.line, parse_real);
        for (double dt : g.dt_values)
            if (dt <= 0.0) throw ConfigError("dt values must be positive", x.line);
        for (size_t i = 1; i < g.dt_values.size(); ++i)
            if (g.dt_values[i] >= g.dt_values[i - 1])
                throw ConfigError("dt_list must be strictly decreasing", x.line);
        if (g.diagonal && g.dt_values.size() != g.n_values.size())
            throw ConfigError("diagonal mode needs n_list and dt_list of equal length", x.line);
    }
    g.t_max = read_tmax(entries);
    if (const Entry* x = entries.optional("delta_factor")) {
        g.delta_factor = parse_real(x->value, x->line);
        if (g.delta_factor <= 0.0) throw ConfigError("delta_factor must be positive", x->line);
    }
    entries.reject_unused();
    return g;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace cutheat
