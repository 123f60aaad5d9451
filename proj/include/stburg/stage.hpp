#pragma once

// Stage marching: solve the dual problem on a short space-time slab, discard
// the top element layers, read data off the cutoff line, and hand initial
// conditions and base states to the next slab until the final time is passed.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stburg/burgers_kernel.hpp"
#include "stburg/exact_solutions.hpp"
#include "stburg/field_ops.hpp"
#include "stburg/hj_kernel.hpp"
#include "stburg/mesh.hpp"
#include "stburg/newton.hpp"

namespace stburg {

enum class Form { conservation, hj, hj_viscous };

Form form_from_name(const std::string& name);
const char* form_name(Form form);

enum class BaseStateMode { self_consistent, viscous_exact };

struct ProblemSpec {
    BenchmarkKind kind;
    Form form = Form::conservation;
    double nu = 0.0;  // kernel viscosity, hj_viscous only
    int flux_sign = +1;
    std::function<double(double)> u0, Y0, ul, Yl;  // primal data
};

ProblemSpec make_benchmark_problem(BenchmarkKind kind, Form form, double nu = 0.0);

struct StageConfig {
    int nx = 50;
    int nt = 50;
    double stage_duration = 1e-2;
    double x_lo = 0.0, x_hi = 1.0;
    double beta_u = 1e6, beta_Y = 1e6;
    int n_cut = 5;
    double tol = 1e-10;
    int newton_max_iter = 50;
    double smoothing_eta = 1e-4;
    BaseStateMode base_mode = BaseStateMode::self_consistent;
    double nu_base = 1e-3;  // oracle viscosity for viscous_exact base states
    int max_stages = 200000;
};

struct StageResult {
    Form form = Form::conservation;
    Mesh mesh;
    Eigen::VectorXd lambda, gamma;  // gamma unused for conservation
    GaussField u, Y;                // bulk Gauss fields (Y unused for conservation)
    NewtonReport newton;
    int retained_rows = 0;          // element layers kept
    double retained_extent = 0.0;   // cutoff time t_f
};

struct CutoffData {
    double t_f = 0.0;
    std::vector<double> u_gauss;  // conservation: u on the cutoff Gauss line (2*nx)
    NodalLine y_line;             // hj: projected Y on the cutoff nodal line
};

// Offset of the cutoff line above the stage start (closed form).
double cutoff_offset(const StageConfig& cfg, Form form);

// One slab solve from a zero dual state. Throws on Newton failure or a
// degenerate map; the message carries the residual history.
StageResult run_stage(const StageConfig& cfg, const Mesh& mesh, const BurgersProblemData& data,
                      const BurgersBase& base);
StageResult run_stage(const StageConfig& cfg, const Mesh& mesh, const HJProblemData& data, const HJBase& base,
                      Form form);

CutoffData truncate_and_cutoff(const StageResult& result, const StageConfig& cfg);
// HJ needs the base field on the cutoff line; ybar_line overrides the stored
// (time-constant) base when the base state varies in time.
CutoffData truncate_and_cutoff(const StageResult& result, const StageConfig& cfg, const HJBase& base,
                               const HJProblemData& data, const std::function<double(double)>& ybar_line = {});

struct BurgersHandoff {
    std::vector<double> u0_gauss;  // unmodified cutoff samples
    NodalLine ubar_line;           // smoothed base state
};
BurgersHandoff next_stage_inputs_burgers(const CutoffData& cutoff, const ProblemSpec& problem,
                                         const StageConfig& cfg);

struct HJHandoff {
    std::vector<double> Y0_gauss;    // projected line at Gauss points
    std::vector<double> ybar_gauss;  // same values (base Y)
    std::vector<double> ubar_gauss;  // slope of the projected interpolant
};
HJHandoff next_stage_inputs_hj(const CutoffData& cutoff);

struct Trajectory {
    ProblemSpec problem;
    StageConfig config;
    std::vector<StageResult> stages;
    bool completed = false;
    std::string failure;  // empty when completed
};

Trajectory march(const ProblemSpec& problem, const StageConfig& cfg, double t_final);

// Figure rule: per retained Gauss timeline, element-pair averages at centers.
struct StageProfiles {
    std::vector<ProfileSlice> u;  // every retained Gauss timeline
    std::vector<ProfileSlice> Y;  // hj only
};
StageProfiles profile_slices(const StageResult& result);

}  // namespace stburg
