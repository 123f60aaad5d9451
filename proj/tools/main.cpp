#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stburg/circle_line.hpp"
#include "stburg/reporting.hpp"

namespace {

struct SolveArgs {
    std::string form = "conservation";
    std::string problem = "shock";
    std::string base_state = "self_consistent";
    int nx = 50, nt = 50, n_cut = 5, newton_max_iter = 50, max_stages = 200000, kink_band = 3;
    double stage_duration = 1e-2, beta_u = 1e6, beta_y = 1e6, tol = 1e-10, nu = 0.0, nu_base = 1e-3, t_final = 0.4,
           smoothing_eta = 1e-4;
    std::string out = "out";
    std::string emit = "csv";
    bool compare = false;
    std::vector<double> plot_times;
    std::string config_path;
};

// key=value file; command-line flags win over file entries
void apply_config_file(const std::string& path, SolveArgs& args, const std::map<std::string, CLI::Option*>& opts) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open config file: " + path);
    std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"form", [&](const std::string& v) { args.form = v; }},
        {"problem", [&](const std::string& v) { args.problem = v; }},
        {"base_state", [&](const std::string& v) { args.base_state = v; }},
        {"nx", [&](const std::string& v) { args.nx = std::stoi(v); }},
        {"nt", [&](const std::string& v) { args.nt = std::stoi(v); }},
        {"n_cut", [&](const std::string& v) { args.n_cut = std::stoi(v); }},
        {"newton_max_iter", [&](const std::string& v) { args.newton_max_iter = std::stoi(v); }},
        {"max_stages", [&](const std::string& v) { args.max_stages = std::stoi(v); }},
        {"kink_band", [&](const std::string& v) { args.kink_band = std::stoi(v); }},
        {"stage_duration", [&](const std::string& v) { args.stage_duration = std::stod(v); }},
        {"beta_u", [&](const std::string& v) { args.beta_u = std::stod(v); }},
        {"beta_y", [&](const std::string& v) { args.beta_y = std::stod(v); }},
        {"tol", [&](const std::string& v) { args.tol = std::stod(v); }},
        {"nu", [&](const std::string& v) { args.nu = std::stod(v); }},
        {"nu_base", [&](const std::string& v) { args.nu_base = std::stod(v); }},
        {"t_final", [&](const std::string& v) { args.t_final = std::stod(v); }},
        {"smoothing_eta", [&](const std::string& v) { args.smoothing_eta = std::stod(v); }},
        {"out", [&](const std::string& v) { args.out = v; }},
        {"emit", [&](const std::string& v) { args.emit = v; }},
        {"compare", [&](const std::string& v) { args.compare = (v == "true" || v == "1"); }},
        {"plot_times",
         [&](const std::string& v) {
             args.plot_times.clear();
             std::stringstream ss(v);
             std::string tok;
             while (std::getline(ss, tok, ',')) args.plot_times.push_back(std::stod(tok));
         }},
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        auto setter = setters.find(key);
        if (setter == setters.end())
            throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": unknown key " + key);
        auto opt = opts.find(key);
        bool overridden = opt != opts.end() && opt->second->count() > 0;
        if (!overridden) setter->second(value);
    }
}

int do_solve(const SolveArgs& args) {
    stburg::RunConfig cfg;
    stburg::Form form = stburg::form_from_name(args.form);
    stburg::BenchmarkKind kind = stburg::benchmark_from_name(args.problem);
    cfg.problem = stburg::make_benchmark_problem(kind, form, args.nu);
    cfg.stage.nx = args.nx;
    cfg.stage.nt = args.nt;
    cfg.stage.stage_duration = args.stage_duration;
    cfg.stage.beta_u = args.beta_u;
    cfg.stage.beta_Y = args.beta_y;
    cfg.stage.n_cut = args.n_cut;
    cfg.stage.tol = args.tol;
    cfg.stage.newton_max_iter = args.newton_max_iter;
    cfg.stage.smoothing_eta = args.smoothing_eta;
    cfg.stage.nu_base = args.nu_base;
    cfg.stage.max_stages = args.max_stages;
    if (args.base_state == "self_consistent") cfg.stage.base_mode = stburg::BaseStateMode::self_consistent;
    else if (args.base_state == "viscous_exact") cfg.stage.base_mode = stburg::BaseStateMode::viscous_exact;
    else throw std::invalid_argument("unknown base state mode: " + args.base_state);
    cfg.t_final = args.t_final;
    cfg.out_dir = args.out;
    cfg.compare = args.compare;
    cfg.plot_times = args.plot_times;
    cfg.kink_band_elems = args.kink_band;

    cfg.emit_csv = cfg.emit_svg = cfg.emit_diagnostics = false;
    std::stringstream ss(args.emit);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "csv") cfg.emit_csv = true;
        else if (tok == "svg") cfg.emit_svg = true;
        else if (tok == "diagnostics") cfg.emit_diagnostics = true;
        else if (tok == "none" || tok.empty()) continue;
        else throw std::invalid_argument("unknown emit target: " + tok);
    }

    int code = stburg::run(cfg);
    if (code == 0)
        std::cout << "completed " << args.problem << " (" << args.form << ") to t = " << args.t_final
                  << "; artifacts in " << args.out << "\n";
    else
        std::cerr << "solver failed; partial artifacts and MANIFEST in " << args.out << "\n";
    return code;
}

int do_circle_line(double alpha, double xbar, double ybar) {
    stburg::CircleLineProblem p{alpha, xbar, ybar};
    stburg::CircleLineResult res = stburg::solve_circle_line(p);
    if (res.one_parameter_family)
        std::cout << "one-parameter family (any lambda != -1/2); representative below\n";
    for (const stburg::CircleLineSolution& s : res.solutions) {
        std::printf("lambda = %+.12g  gamma = %+.12g  ->  (x, y) = (%+.12g, %+.12g)  S = %.12g\n", s.lambda, s.gamma,
                    s.x, s.y, stburg::circle_line_dual_value(p, s.lambda, s.gamma));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"space-time dual solver for inviscid Burgers flow"};
    app.require_subcommand(1);

    SolveArgs args;
    std::map<std::string, CLI::Option*> opts;
    CLI::App* solve = app.add_subcommand("solve", "march a benchmark problem and emit artifacts");
    opts["form"] = solve->add_option("--form", args.form, "conservation | hj | hj_viscous");
    opts["problem"] =
        solve->add_option("--problem", args.problem, "fan | shock | double_shock | half_nwave | nwave");
    opts["base_state"] = solve->add_option("--base-state", args.base_state, "self_consistent | viscous_exact");
    opts["nx"] = solve->add_option("--nx", args.nx, "elements in x");
    opts["nt"] = solve->add_option("--nt", args.nt, "element layers per stage");
    opts["stage_duration"] = solve->add_option("--stage-duration", args.stage_duration, "slab height in t");
    opts["beta_u"] = solve->add_option("--beta-u", args.beta_u, "auxiliary potential coefficient for u");
    opts["beta_y"] = solve->add_option("--beta-y", args.beta_y, "auxiliary potential coefficient for Y");
    opts["n_cut"] = solve->add_option("--n-cut", args.n_cut, "discarded top element layers");
    opts["tol"] = solve->add_option("--tol", args.tol, "Newton residual tolerance");
    opts["nu"] = solve->add_option("--nu", args.nu, "kernel viscosity (hj_viscous)");
    opts["nu_base"] = solve->add_option("--nu-base", args.nu_base, "oracle viscosity (viscous_exact base)");
    opts["t_final"] = solve->add_option("--t-final", args.t_final, "march until the cutoff passes this time");
    opts["smoothing_eta"] = solve->add_option("--smoothing-eta", args.smoothing_eta, "base smoothing strength");
    opts["newton_max_iter"] = solve->add_option("--newton-max-iter", args.newton_max_iter, "Newton iteration cap");
    opts["max_stages"] = solve->add_option("--max-stages", args.max_stages, "stage cap");
    opts["kink_band"] = solve->add_option("--kink-band", args.kink_band, "error-norm exclusion half-width, elements");
    opts["out"] = solve->add_option("--out", args.out, "output directory");
    opts["emit"] = solve->add_option("--emit", args.emit, "comma list of csv,svg,diagnostics (or none)");
    opts["compare"] = solve->add_flag("--compare", args.compare, "write error report vs exact solution");
    opts["plot_times"] =
        solve->add_option("--plot-times", args.plot_times, "times for SVG profiles")->delimiter(',');
    solve->add_option("--config", args.config_path, "key=value file; flags override");

    double alpha = 0.0, xbar = 0.0, ybar = 1.0;
    CLI::App* circle = app.add_subcommand("circle-line", "closed-form duality demo: unit circle vs x = alpha");
    circle->add_option("--alpha", alpha, "line position");
    circle->add_option("--xbar", xbar, "base state x");
    circle->add_option("--ybar", ybar, "base state y");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) {
            if (!args.config_path.empty()) apply_config_file(args.config_path, args, opts);
            return do_solve(args);
        }
        return do_circle_line(alpha, xbar, ybar);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
