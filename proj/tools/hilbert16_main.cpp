// Command-line front end: bounds, divcurve, contacts, oracle, descend,
// census, validate. JSON reports go to stdout or --out; CSV artifacts are
// opt-in per command. Logging goes to stderr, controlled by HILBERT16_LOG.

#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "hilbert16/bounds.hpp"
#include "hilbert16/ode_oracle.hpp"
#include "hilbert16/report_io.hpp"

namespace h16 = hilbert16;
using h16::json;

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("HILBERT16_LOG");
    if (!env) return LogLevel::Info;
    const std::string v = env;
    if (v == "quiet") return LogLevel::Quiet;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[hilbert16] " << msg << "\n";
}
void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[hilbert16:debug] " << msg << "\n";
}

std::pair<double, double> parse_range(const std::string& s) {
    const auto pos = s.find(':', 1);  // allow a leading '-'
    if (pos == std::string::npos)
        throw h16::Error(h16::errc::usage, "window must be lo:hi, got '" + s + "'");
    try {
        const double lo = std::stod(s.substr(0, pos));
        const double hi = std::stod(s.substr(pos + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw h16::Error(h16::errc::usage, "window must be lo:hi, got '" + s + "'");
    }
}

struct CommonFlags {
    std::string system_file;
    std::string out_file;
    std::string window = "-10:10";
    std::string window_x, window_y;
    int grid = 512;
    int K = 256;
    double eps = 0.0;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool h2_precondition = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_system = true) {
    if (with_system) cmd->add_option("--system", f.system_file, "system JSON file");
    cmd->add_option("--out", f.out_file, "write the JSON report to this file");
    cmd->add_option("--window", f.window, "search window lo:hi applied to both axes");
    cmd->add_option("--window-x", f.window_x, "x-axis window lo:hi (overrides --window)");
    cmd->add_option("--window-y", f.window_y, "y-axis window lo:hi (overrides --window)");
    cmd->add_option("--grid", f.grid, "marching-squares lattice resolution");
    cmd->add_option("--K", f.K, "path samples for discretized-path commands");
    cmd->add_option("--eps", f.eps, "singular-perturbation epsilon");
    cmd->add_option("--tol", f.tol, "solver residual tolerance");
    cmd->add_option("--seed", f.seed, "seed for randomized steps");
    cmd->add_option("--jobs", f.jobs, "worker threads for solver subdivision");
    cmd->add_flag("--h2-precondition", f.h2_precondition,
                  "precondition descent by the inverse discrete H^2 form");
}

h16::Box2 window_of(const CommonFlags& f) {
    auto [xlo, xhi] = parse_range(f.window_x.empty() ? f.window : f.window_x);
    auto [ylo, yhi] = parse_range(f.window_y.empty() ? f.window : f.window_y);
    return h16::Box2(xlo, xhi, ylo, yhi);
}

h16::PlanarSystem load_system(const CommonFlags& f) {
    if (f.system_file.empty())
        throw h16::Error(h16::errc::usage, "this command needs --system FILE");
    const h16::SystemFile sf = h16::read_system_file(f.system_file);
    log_debug("loaded system '" + (sf.name.empty() ? f.system_file : sf.name) + "'");
    return h16::parse_system(sf);
}

void emit(const json& j, const CommonFlags& f) {
    const std::string text = h16::dump_json(j);
    if (f.out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(f.out_file);
        if (!out) throw h16::Error(h16::errc::usage, "cannot write '" + f.out_file + "'");
        out << text;
        log_info("wrote " + f.out_file);
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw h16::Error(h16::errc::usage, "cannot write '" + path + "'");
    out << text;
    log_info("wrote " + path);
}

h16::Solve2dOptions solve_opts(const CommonFlags& f) {
    h16::Solve2dOptions so;
    so.jobs = f.jobs;
    return so;
}

// full pipeline: divergence curve, contacts, census, bound arithmetic
json run_bounds_pipeline(const h16::PlanarSystem& sys, const CommonFlags& f) {
    const h16::Box2 window = window_of(f);
    log_info("tracing divergence curve (grid " + std::to_string(f.grid) + ")");
    const h16::DivCurveReport curve = h16::div_curve_report(sys, window, f.grid);
    log_info("solving contact system");
    const h16::ContactReport contacts = h16::contact_points(sys, window, f.tol, solve_opts(f));
    const h16::BehaviorCensus census = h16::behavior_census(curve, contacts);
    const h16::BoundReport rep = h16::bound_report(sys, curve, contacts, census);
    json j = h16::to_json(rep);
    if (sys.degree == 2) j["quadratic_verdict"] = h16::to_json(h16::quadratic_verdict(sys, contacts));
    return j;
}

h16::DiscretizedPath initial_path(const std::string& init, int K, std::uint64_t seed) {
    if (init.rfind("circle:", 0) == 0) {
        const double r = std::stod(init.substr(7));
        return h16::DiscretizedPath::circle(K, r);
    }
    if (init.rfind("file:", 0) == 0) {
        const std::string path = init.substr(5);
        std::ifstream in(path);
        if (!in) throw h16::Error(h16::errc::usage, "cannot open init path '" + path + "'");
        std::vector<double> xs, ys;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string t, x, y;
            std::getline(ss, t, ',');
            std::getline(ss, x, ',');
            std::getline(ss, y, ',');
            xs.push_back(std::stod(x));
            ys.push_back(std::stod(y));
        }
        h16::DiscretizedPath p(std::move(xs), std::move(ys));
        return p.K() == K ? p : h16::resample(p, K);
    }
    if (init.rfind("noisy-circle:", 0) == 0) {
        // circle with seeded band-limited radial noise, for experiments
        const double r = std::stod(init.substr(13));
        h16::DiscretizedPath p = h16::DiscretizedPath::circle(K, r);
        std::mt19937_64 rng(seed);
        auto u = [&rng]() { return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0; };
        std::vector<double> amp(6), phase(6);
        for (int m = 0; m < 6; ++m) {
            amp[m] = u();
            phase[m] = u() * 3.141592653589793;
        }
        for (int k = 0; k < K; ++k) {
            double xi = 0.0;
            for (int m = 0; m < 6; ++m)
                xi += amp[m] * std::cos(2.0 * 3.141592653589793 * (m + 1) * k / K + phase[m]);
            const double scale = 1.0 + 0.05 * xi / 6.0;
            p.x[k] *= scale;
            p.y[k] *= scale;
        }
        return p;
    }
    throw h16::Error(h16::errc::usage,
                     "--init must be circle:R, noisy-circle:R or file:PATH.csv, got '" + init +
                         "'");
}

h16::Section parse_section(const std::string& s, double offset) {
    // "x=0+" crossings with x increasing; "y=1.5+" crossings with y increasing;
    // trailing '-' flips the direction
    if (s.size() < 3 || (s[0] != 'x' && s[0] != 'y') || s[1] != '=')
        throw h16::Error(h16::errc::usage, "--section must look like x=0+ or y=2-, got '" + s + "'");
    double sign = 1.0;
    std::string value = s.substr(2);
    if (!value.empty() && (value.back() == '+' || value.back() == '-')) {
        sign = value.back() == '-' ? -1.0 : 1.0;
        value.pop_back();
    }
    const double v = std::stod(value);
    if (s[0] == 'x') return h16::Section{{v, offset}, {sign, 0.0}};
    return h16::Section{{offset, v}, {0.0, sign}};
}

int dispatch(int argc, char** argv) {
    CLI::App app{"limit-cycle bounds and variational search for planar polynomial systems"};
    app.require_subcommand(1);

    // ---- bounds ----
    CommonFlags bf;
    int bounds_degree = 0;
    int table_max = 0;
    auto* cmd_bounds = app.add_subcommand(
        "bounds", "counting bounds: explicit formulas for a bare degree, or the full "
                  "divcurve/contacts/census pipeline for a system");
    add_common(cmd_bounds, bf);
    cmd_bounds->add_option("--degree", bounds_degree, "evaluate the degree-n bound formulas");
    cmd_bounds->add_option("--table", table_max, "print the bound table for n = 2..N as text");
    cmd_bounds->callback([&] {
        if (table_max > 0) {
            if (table_max < 2)
                throw h16::Error(h16::errc::invalid_degree, "--table needs N >= 2");
            std::printf("%4s %16s %16s %16s\n", "n", "quartic_bound", "harnack_cap_M",
                        "bezout_cap_N");
            for (int n = 2; n <= table_max; ++n)
                std::printf("%4d %16lld %16lld %16lld\n", n, h16::quartic_bound(n),
                            h16::harnack_max_components(n - 1),
                            h16::bezout_bound(2 * (n - 1), n - 1));
            return;
        }
        if (bounds_degree != 0) {
            const int n = bounds_degree;
            const long long hq = h16::quartic_bound(n);  // throws InvalidDegree for n < 2
            const long long hm = h16::harnack_max_components(n - 1);
            const long long bz = h16::bezout_bound(2 * (n - 1), n - 1);
            json j{{"kind", "bounds"},
                   {"n", n},
                   {"quartic_bound", hq},
                   {"harnack_cap_on_M", hm},
                   {"bezout_cap_on_N", bz},
                   {"master_bound_at_caps", h16::master_bound(n, hm, bz)},
                   {"notes", json::array()}};
            emit(j, bf);
            return;
        }
        emit(run_bounds_pipeline(load_system(bf), bf), bf);
    });

    // ---- divcurve ----
    CommonFlags df;
    std::string div_csv;
    auto* cmd_div = app.add_subcommand("divcurve",
                                       "trace the divergence curve and classify components");
    add_common(cmd_div, df);
    cmd_div->add_option("--csv", div_csv, "write component polylines as CSV");
    cmd_div->callback([&] {
        const auto sys = load_system(df);
        const auto rep = h16::div_curve_report(sys, window_of(df), df.grid);
        if (!div_csv.empty()) write_text(div_csv, h16::polylines_csv(rep.components));
        emit(h16::to_json(rep), df);
    });

    // ---- contacts ----
    CommonFlags cf;
    auto* cmd_contacts =
        app.add_subcommand("contacts", "certified contact points of the field with Div = 0");
    add_common(cmd_contacts, cf);
    cmd_contacts->callback([&] {
        const auto sys = load_system(cf);
        const h16::Box2 window = window_of(cf);
        const auto rep = h16::contact_points(sys, window, cf.tol, solve_opts(cf));
        emit(h16::to_json(rep, window), cf);
    });

    // ---- oracle ----
    CommonFlags of;
    std::string section_str = "x=0+";
    std::string start_str = "2,0";
    std::string orbit_csv_file;
    double oracle_h = 1e-3;
    double oracle_tol = 1e-9;
    auto* cmd_oracle = app.add_subcommand(
        "oracle", "classical verification: locate a limit cycle via the Poincare return map");
    add_common(cmd_oracle, of);
    cmd_oracle->add_option("--section", section_str, "directed section, e.g. x=0+ or y=1.5-");
    cmd_oracle->add_option("--x0", start_str, "starting point 'x,y'");
    cmd_oracle->add_option("--step", oracle_h, "RK4 step size");
    cmd_oracle->add_option("--cycle-tol", oracle_tol, "return-map fixed point tolerance");
    cmd_oracle->add_option("--csv", orbit_csv_file, "write the orbit as CSV (t,x,y)");
    cmd_oracle->callback([&] {
        const auto sys = load_system(of);
        const auto comma = start_str.find(',');
        if (comma == std::string::npos)
            throw h16::Error(h16::errc::usage, "--x0 must be 'x,y'");
        const h16::Vec2 x0{std::stod(start_str.substr(0, comma)),
                           std::stod(start_str.substr(comma + 1))};
        h16::CycleOptions copts;
        copts.h = oracle_h;
        copts.K_out = of.K;
        const h16::Section section = parse_section(section_str, x0.y);
        const h16::Orbit orbit = h16::find_limit_cycle(sys, section, x0, oracle_tol, copts);
        if (!orbit_csv_file.empty()) write_text(orbit_csv_file, h16::orbit_csv(orbit));
        json j = h16::to_json(orbit);
        j["energy_check"] = h16::cycle_energy_check(sys, orbit, of.K);
        std::cerr << "period " << h16::format_double(*orbit.period) << "\n";
        emit(j, of);
    });

    // ---- descend ----
    CommonFlags sf;
    std::string init_str = "circle:1";
    std::string path_csv_file, trace_csv_file;
    int max_iters = 50000;
    double grad_tol = 1e-8;
    auto* cmd_descend = app.add_subcommand(
        "descend", "steepest descent of the path energy in the winding +1 class");
    add_common(cmd_descend, sf);
    cmd_descend->add_option("--init", init_str, "circle:R, noisy-circle:R or file:PATH.csv");
    cmd_descend->add_option("--max-iters", max_iters, "iteration cap");
    cmd_descend->add_option("--grad-tol", grad_tol, "gradient norm stopping tolerance");
    cmd_descend->add_option("--csv", path_csv_file, "write the final path as CSV (t,x,y)");
    cmd_descend->add_option("--trace", trace_csv_file, "write the descent trace as CSV");
    cmd_descend->callback([&] {
        const auto sys = load_system(sf);
        h16::EnergyConfig cfg;
        cfg.epsilon = sf.eps;
        if (sf.eps > 0.0) cfg.v_eps = h16::make_v_eps(sf.eps, sf.K, 0.01);
        h16::DescendOptions dopts;
        dopts.max_iters = max_iters;
        dopts.grad_tol = grad_tol;
        dopts.h2_precondition = sf.h2_precondition;
        const auto start = initial_path(init_str, sf.K, sf.seed);
        log_info("descending (K " + std::to_string(sf.K) + ", eps " + std::to_string(sf.eps) +
                 ")");
        const auto res = h16::descend(start, sys, cfg, dopts);
        if (!path_csv_file.empty()) write_text(path_csv_file, h16::path_csv(res.path));
        if (!trace_csv_file.empty()) write_text(trace_csv_file, h16::trace_csv(res.trace));
        json j = h16::to_json(res);
        j["E0"] = h16::energy_E0(res.path, sys);
        emit(j, sf);
    });

    // ---- census ----
    CommonFlags nf;
    auto* cmd_census = app.add_subcommand(
        "census", "count admissible asymptotic behaviors per divergence-curve component");
    add_common(cmd_census, nf);
    cmd_census->callback([&] {
        const auto sys = load_system(nf);
        const h16::Box2 window = window_of(nf);
        const auto curve = h16::div_curve_report(sys, window, nf.grid);
        const auto contacts = h16::contact_points(sys, window, nf.tol, solve_opts(nf));
        const auto census = h16::behavior_census(curve, contacts);
        emit(h16::to_json(census), nf);
    });

    // ---- validate ----
    std::string validate_file;
    auto* cmd_validate =
        app.add_subcommand("validate", "check that a JSON report produced by this tool is sane");
    cmd_validate->add_option("file", validate_file, "report file")->required();
    cmd_validate->callback([&] {
        std::ifstream in(validate_file);
        if (!in)
            throw h16::Error(h16::errc::usage, "cannot open '" + validate_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        h16::validate_report_text(ss.str());
        log_info(validate_file + " is valid");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const h16::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return h16::errc_exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
