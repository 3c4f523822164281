#pragma once

// Run configuration: a flat key = value text file, with CLI flags layered on
// top by the tool. Unknown keys are rejected with their line number.

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace braneflow {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string kind = "paper";  // paper | model_Rv | model_v

    // seeding
    double u_star = 1.0;
    double eps0 = 1.0;
    int eps_levels = 10;  // ladder eps0 * 2^0 .. 2^-eps_levels
    int n_per_arc = 64;

    // window and report times
    double window_lo = 0.5;
    double window_hi = 1.5;
    std::vector<double> times = {2.0, 5.0, 10.0, 20.0};
    std::vector<double> evolve_times = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};

    // integrator
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;

    // field sampling
    std::vector<double> field_r = {0.0, -0.1, -0.4, -2.0};
    double field_min = -2.0;
    double field_max = 2.0;
    int field_n = 25;

    // fiber slice (evolve)
    double u_slice = 1.0;
    double slice_tol = 0.1;

    // Seidel-Smith companion run
    double w_star = -1.0;
    double ss_window_lo = 0.5;
    double ss_window_hi = 1.5;
    double ss_margin = 0.5;
    std::vector<double> ss_times = {0.0, 1.0, 2.0, 3.0};

    // outputs
    std::string out_dir = "out";
    std::string formats = "csv";  // comma list of csv,json,svg

    // verification
    double perturb_f = 0.0;

    bool wants(const std::string& fmt) const {
        return ("," + formats + ",").find("," + fmt + ",") != std::string::npos;
    }
};

namespace detail {

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("invalid number '" + item + "' in key '" + key + "'");
        }
    }
    return out;
}

inline std::string format_list(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

}  // namespace detail

/// Apply a single key = value assignment; throws ConfigError on unknown keys
/// or malformed values. `where` names the source location for diagnostics.
inline void config_set(RunConfig& c, const std::string& key, const std::string& value,
                       const std::string& where) {
    const auto num = [&](double& slot) {
        try {
            std::size_t pos = 0;
            slot = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ConfigError(where + ": invalid number '" + value + "' for key '" + key + "'");
        }
    };
    const auto integer = [&](int& slot) {
        double d;
        num(d);
        slot = static_cast<int>(d);
        if (slot != d) throw ConfigError(where + ": key '" + key + "' expects an integer");
    };

    if (key == "kind") {
        if (value != "paper" && value != "model_Rv" && value != "model_v")
            throw ConfigError(where + ": unknown hamiltonian kind '" + value + "'");
        c.kind = value;
    } else if (key == "u_star") num(c.u_star);
    else if (key == "eps0") num(c.eps0);
    else if (key == "eps_levels") integer(c.eps_levels);
    else if (key == "n_per_arc") integer(c.n_per_arc);
    else if (key == "window_lo") num(c.window_lo);
    else if (key == "window_hi") num(c.window_hi);
    else if (key == "times") c.times = detail::parse_list(value, key);
    else if (key == "evolve_times") c.evolve_times = detail::parse_list(value, key);
    else if (key == "rel_tol") num(c.rel_tol);
    else if (key == "abs_tol") num(c.abs_tol);
    else if (key == "field_r") c.field_r = detail::parse_list(value, key);
    else if (key == "field_min") num(c.field_min);
    else if (key == "field_max") num(c.field_max);
    else if (key == "field_n") integer(c.field_n);
    else if (key == "u_slice") num(c.u_slice);
    else if (key == "slice_tol") num(c.slice_tol);
    else if (key == "w_star") num(c.w_star);
    else if (key == "ss_window_lo") num(c.ss_window_lo);
    else if (key == "ss_window_hi") num(c.ss_window_hi);
    else if (key == "ss_margin") num(c.ss_margin);
    else if (key == "ss_times") c.ss_times = detail::parse_list(value, key);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "formats") c.formats = value;
    else if (key == "perturb_f") num(c.perturb_f);
    else throw ConfigError(where + ": unknown key '" + key + "'");
}

/// Parse a flat key = value config. '#' starts a comment; blank lines ignored.
inline RunConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string stripped = strip(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value, got '" + stripped + "'");
        config_set(c, strip(stripped.substr(0, eq)), strip(stripped.substr(eq + 1)), where);
    }
    return c;
}

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "kind = " << c.kind << "\n"
       << "u_star = " << c.u_star << "\n"
       << "eps0 = " << c.eps0 << "\n"
       << "eps_levels = " << c.eps_levels << "\n"
       << "n_per_arc = " << c.n_per_arc << "\n"
       << "window_lo = " << c.window_lo << "\n"
       << "window_hi = " << c.window_hi << "\n"
       << "times = " << detail::format_list(c.times) << "\n"
       << "evolve_times = " << detail::format_list(c.evolve_times) << "\n"
       << "rel_tol = " << c.rel_tol << "\n"
       << "abs_tol = " << c.abs_tol << "\n"
       << "field_r = " << detail::format_list(c.field_r) << "\n"
       << "field_min = " << c.field_min << "\n"
       << "field_max = " << c.field_max << "\n"
       << "field_n = " << c.field_n << "\n"
       << "u_slice = " << c.u_slice << "\n"
       << "slice_tol = " << c.slice_tol << "\n"
       << "w_star = " << c.w_star << "\n"
       << "ss_window_lo = " << c.ss_window_lo << "\n"
       << "ss_window_hi = " << c.ss_window_hi << "\n"
       << "ss_margin = " << c.ss_margin << "\n"
       << "ss_times = " << detail::format_list(c.ss_times) << "\n"
       << "out_dir = " << c.out_dir << "\n"
       << "formats = " << c.formats << "\n"
       << "perturb_f = " << c.perturb_f << "\n";
    return os.str();
}

}  // namespace braneflow
