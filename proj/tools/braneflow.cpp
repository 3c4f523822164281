// braneflow: simulate the Hamiltonian transport of the mapping-cone brane and
// emit the datasets behind the flow figures and convergence reports.
//
// Subcommands: verify, field, evolve, converge, ss.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "braneflow/branes.hpp"
#include "braneflow/config.hpp"
#include "braneflow/coords.hpp"
#include "braneflow/flow.hpp"
#include "braneflow/hamiltonian.hpp"
#include "braneflow/io.hpp"
#include "braneflow/ss_model.hpp"
#include "braneflow/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

braneflow::HamiltonianSpec make_spec(const braneflow::RunConfig& cfg) {
    braneflow::HamiltonianSpec spec;
    if (cfg.kind == "paper") spec = braneflow::HamiltonianSpec::paper();
    else if (cfg.kind == "model_Rv") spec = braneflow::HamiltonianSpec::model_Rv();
    else if (cfg.kind == "model_v") spec = braneflow::HamiltonianSpec::model_v();
    else throw braneflow::ConfigError("unknown hamiltonian kind '" + cfg.kind + "'");
    spec.f_perturbation = cfg.perturb_f;
    return spec;
}

braneflow::IntegratorConfig make_integrator(const braneflow::RunConfig& cfg) {
    braneflow::IntegratorConfig icfg;
    icfg.rel_tol = cfg.rel_tol;
    icfg.abs_tol = cfg.abs_tol;
    return icfg;
}

fs::path out_dir(const braneflow::RunConfig& cfg) {
    fs::path dir = cfg.out_dir;
    if (const char* env = std::getenv("BRANEFLOW_OUT")) dir = env;
    fs::create_directories(dir);
    return dir;
}

std::string format_time(double t) {
    std::ostringstream os;
    os << t;
    std::string s = os.str();
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

int cmd_verify(const braneflow::RunConfig& cfg, bool as_json) {
    braneflow::VerifyOptions opt;
    opt.perturb_f = cfg.perturb_f;
    const auto results = braneflow::run_verification(opt);

    bool all_pass = true;
    if (as_json) {
        json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["checks"] = json::array();
        for (const auto& r : results) {
            doc["checks"].push_back({{"name", r.name},
                                     {"pass", r.pass},
                                     {"value", r.value},
                                     {"threshold", r.threshold},
                                     {"comparison", r.want_below ? "<=" : ">"}});
            all_pass = all_pass && r.pass;
        }
        doc["pass"] = all_pass;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << std::left;
        for (const auto& r : results) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << std::setw(46) << r.name
                      << std::scientific << std::setprecision(3) << " value " << r.value
                      << (r.want_below ? "  <= " : "  >  ") << r.threshold << "\n"
                      << std::defaultfloat;
            all_pass = all_pass && r.pass;
        }
        std::cout << (all_pass ? "all checks passed" : "CHECK FAILURES PRESENT") << " ("
                  << results.size() << " checks)\n";
    }
    return all_pass ? 0 : 1;
}

int cmd_field(const braneflow::RunConfig& cfg) {
    const auto spec = make_spec(cfg);
    const fs::path dir = out_dir(cfg);
    const braneflow::Rectangle bounds{cfg.field_min, cfg.field_max, cfg.field_min,
                                      cfg.field_max};
    for (double r : cfg.field_r) {
        const auto grid = braneflow::field_grid(spec, r, bounds, cfg.field_n);
        const std::string tag = "field_" + cfg.kind + "_r" + format_time(r);
        if (cfg.wants("csv")) {
            braneflow::CsvWriter csv(dir / (tag + ".csv"), {"u", "v", "du", "dv", "speed"});
            for (const auto& s : grid)
                csv.row({s.p.u, s.p.v, s.X.du, s.X.dv, s.speed});
        }
        if (cfg.wants("svg"))
            braneflow::write_field_svg(dir / (tag + ".svg"), grid, bounds);
        std::cout << "wrote " << (dir / tag).string() << ".{csv" << (cfg.wants("svg") ? ",svg" : "")
                  << "} (" << grid.size() << " samples)\n";
    }
    return 0;
}

int cmd_evolve(const braneflow::RunConfig& cfg) {
    const auto spec = make_spec(cfg);
    const fs::path dir = out_dir(cfg);
    auto icfg = make_integrator(cfg);
    icfg.snapshot_times = cfg.evolve_times;
    icfg.t_end = cfg.evolve_times.back();

    const auto seeds = braneflow::seed_semicircles(
        cfg.u_star, braneflow::eps_ladder(cfg.eps0, cfg.eps_levels), cfg.n_per_arc);
    std::vector<double> H0(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        H0[i] = braneflow::H_value(spec, seeds.points[i]);
    const auto snaps = braneflow::evolve_cloud(spec, seeds, icfg);

    braneflow::CsvWriter csv(dir / "snapshots.csv",
                             {"t", "id", "eps", "arc_angle", "u", "v", "r", "theta",
                              "theta_lift", "H0", "H"});
    for (const auto& snap : snaps) {
        for (std::size_t i = 0; i < snap.cloud.size(); ++i) {
            if (!snap.ok[i]) continue;
            const auto& p = snap.cloud.points[i];
            const auto& lab = snap.cloud.labels[i];
            csv.row({snap.t, static_cast<double>(i),
                     lab.eps ? std::optional<double>(*lab.eps) : std::nullopt,
                     lab.arc_angle ? std::optional<double>(*lab.arc_angle) : std::nullopt,
                     p.u, p.v, p.r, p.theta, snap.theta_lift[i], H0[i], snap.H[i]});
        }
        const std::string tag = format_time(snap.t);
        braneflow::CsvWriter uvr(dir / ("proj_uvr_t" + tag + ".csv"), {"u", "v", "r"});
        braneflow::CsvWriter utr(dir / ("proj_uthetar_t" + tag + ".csv"), {"u", "theta", "r"});
        braneflow::CsvWriter slice(dir / ("fiber_slice_t" + tag + ".csv"),
                                   {"theta", "r", "eps"});
        for (std::size_t i = 0; i < snap.cloud.size(); ++i) {
            if (!snap.ok[i]) continue;
            const auto& p = snap.cloud.points[i];
            uvr.row({p.u, p.v, p.r});
            utr.row({p.u, p.theta, p.r});
            if (std::fabs(p.u - cfg.u_slice) < cfg.slice_tol)
                slice.row({p.theta, p.r,
                           snap.cloud.labels[i].eps
                               ? std::optional<double>(*snap.cloud.labels[i].eps)
                               : std::nullopt});
        }
    }
    std::cout << "wrote " << (dir / "snapshots.csv").string() << " and projections for "
              << snaps.size() << " times\n";
    return 0;
}

int cmd_converge(const braneflow::RunConfig& cfg) {
    const auto spec = make_spec(cfg);
    const fs::path dir = out_dir(cfg);
    const auto report = braneflow::convergence_run(
        spec, cfg.u_star, braneflow::eps_ladder(cfg.eps0, cfg.eps_levels), cfg.n_per_arc,
        {cfg.window_lo, cfg.window_hi}, cfg.times, make_integrator(cfg));

    if (cfg.wants("csv")) {
        braneflow::CsvWriter csv(dir / "convergence.csv",
                                 {"t", "offset", "theta_gap", "hausdorff"});
        for (std::size_t i = 0; i < report.times.size(); ++i)
            csv.row({report.times[i], report.offset[i], report.theta_gap[i],
                     report.hausdorff[i]});
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["window"] = {report.window.lo, report.window.hi};
    doc["times"] = report.times;
    doc["offset"] = json::array();
    doc["theta_gap"] = json::array();
    doc["hausdorff"] = json::array();
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        doc["offset"].push_back(optional_json(report.offset[i]));
        doc["theta_gap"].push_back(optional_json(report.theta_gap[i]));
        doc["hausdorff"].push_back(optional_json(report.hausdorff[i]));
    }
    std::ofstream(dir / "convergence.json") << doc.dump(2) << "\n";
    std::cout << "wrote " << (dir / "convergence").string() << ".{csv,json}\n";
    return 0;
}

int cmd_ss(const braneflow::RunConfig& cfg) {
    const fs::path dir = out_dir(cfg);
    std::vector<double> v_samples, y_samples;
    for (int i = 0; i <= 160; ++i) v_samples.push_back(-2.0 + 4.0 * i / 160);
    for (int i = 0; i <= 40; ++i) y_samples.push_back(0.5 * std::pow(4.0, i / 40.0));
    const auto report = braneflow::ss_convergence(cfg.w_star, v_samples, y_samples,
                                                  cfg.ss_window_lo, cfg.ss_window_hi,
                                                  cfg.ss_margin, cfg.ss_times);
    if (cfg.wants("csv")) {
        braneflow::CsvWriter csv(dir / "ss_report.csv",
                                 {"t", "max_residual", "n_points_in_window", "im_w_drift"});
        for (const auto& row : report.rows)
            csv.row({row.t, row.max_residual, static_cast<double>(row.n_points_in_window),
                     row.im_w_drift});
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["w_star"] = cfg.w_star;
    doc["stable_intersection"] = {
        {"x", {report.stable_intersection.x.real(), report.stable_intersection.x.imag()}},
        {"y", {report.stable_intersection.y.real(), report.stable_intersection.y.imag()}}};
    doc["rows"] = json::array();
    for (const auto& row : report.rows)
        doc["rows"].push_back({{"t", row.t},
                               {"max_residual", optional_json(row.max_residual)},
                               {"n_points_in_window", row.n_points_in_window},
                               {"im_w_drift", row.im_w_drift}});
    std::ofstream(dir / "ss_report.json") << doc.dump(2) << "\n";
    std::cout << "wrote " << (dir / "ss_report").string() << ".{csv,json}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian brane-flow simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    bool as_json = false;
    app.add_option("-c,--config", config_path, "flat key = value config file");
    app.add_option("-s,--set", overrides, "override a config key, e.g. --set u_star=2");
    app.add_flag("--json", as_json, "machine-readable output where applicable");

    double perturb_f = 0.0;
    auto* verify = app.add_subcommand("verify", "run the full invariant suite");
    verify->add_option("--perturb-f", perturb_f, "perturb the radial profile (negative control)");
    auto* field = app.add_subcommand("field", "sample the base vector field on a grid");
    auto* evolve = app.add_subcommand("evolve", "evolve the seeded brane cloud, write snapshots");
    auto* converge = app.add_subcommand("converge", "run the convergence scenario and report");
    auto* ss = app.add_subcommand("ss", "run the exactly solvable companion model");

    CLI11_PARSE(app, argc, argv);

    braneflow::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw braneflow::ConfigError("cannot read config file: " + config_path);
            cfg = braneflow::parse_config(in, config_path);
        }
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw braneflow::ConfigError("--set expects key=value, got '" + kv + "'");
            braneflow::config_set(cfg, kv.substr(0, eq), kv.substr(eq + 1), "<cli>");
        }
        if (verify->count("--perturb-f")) cfg.perturb_f = perturb_f;
    } catch (const braneflow::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*verify) return cmd_verify(cfg, as_json);
        if (*field) return cmd_field(cfg);
        if (*evolve) return cmd_evolve(cfg);
        if (*converge) return cmd_converge(cfg);
        if (*ss) return cmd_ss(cfg);
    } catch (const braneflow::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
