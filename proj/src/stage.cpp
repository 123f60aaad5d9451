#include "stburg/stage.hpp"

#include <cmath>
#include <stdexcept>

#include "stburg/errors.hpp"

namespace stburg {

Form form_from_name(const std::string& name) {
    if (name == "conservation") return Form::conservation;
    if (name == "hj") return Form::hj;
    if (name == "hj_viscous") return Form::hj_viscous;
    throw std::invalid_argument("unknown form: " + name);
}

const char* form_name(Form form) {
    switch (form) {
        case Form::conservation: return "conservation";
        case Form::hj: return "hj";
        case Form::hj_viscous: return "hj_viscous";
    }
    throw std::invalid_argument("form_name: bad form");
}

ProblemSpec make_benchmark_problem(BenchmarkKind kind, Form form, double nu) {
    if (form == Form::hj_viscous && !(nu > 0)) throw std::invalid_argument("hj_viscous requires nu > 0");
    ProblemSpec p;
    p.kind = kind;
    p.form = form;
    p.nu = form == Form::hj_viscous ? nu : 0.0;
    p.flux_sign = +1;
    p.u0 = [kind](double x) { return initial_u(kind, x); };
    p.Y0 = [kind](double x) { return initial_Y(kind, x); };
    p.ul = [kind](double t) { return boundary_u(kind, t); };
    p.Yl = [kind](double t) { return boundary_Y(kind, t); };
    return p;
}

double cutoff_offset(const StageConfig& cfg, Form form) {
    if (cfg.n_cut < 0 || cfg.n_cut >= cfg.nt) throw std::invalid_argument("cutoff_offset: need 0 <= n_cut < nt");
    double te = cfg.stage_duration / cfg.nt;
    if (form == Form::conservation)
        return (cfg.nt - cfg.n_cut - 1) * te + te * (0.5 + 0.5 * kGaussAbscissa);
    return (cfg.nt - cfg.n_cut) * te;
}

namespace {

Eigen::VectorXd run_newton_free(const StageConfig& cfg, const ResidualFn& res, const JacobianFn& jac, int n_free,
                                NewtonReport& report) {
    NewtonOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.newton_max_iter;
    auto [x, rep] = newton_solve(res, jac, Eigen::VectorXd::Zero(n_free), opts);
    report = rep;
    if (!rep.converged) {
        std::string hist;
        for (double d : rep.residual_history) hist += " " + std::to_string(d);
        throw NewtonDivergedError("stage solve did not converge; residual history:" + hist);
    }
    return x;
}

}  // namespace

StageResult run_stage(const StageConfig& cfg, const Mesh& mesh, const BurgersProblemData& data,
                      const BurgersBase& base) {
    BurgersDofMap dofs = make_burgers_dof_map(mesh);
    BurgersDualState state = make_burgers_state(mesh);

    auto scatter = [&](const Eigen::VectorXd& xfree) {
        BurgersDualState s = state;
        for (int k = 0; k < dofs.n_free(); ++k) s.lambda(dofs.free_to_node[static_cast<size_t>(k)]) = xfree(k);
        return s;
    };
    ResidualFn res = [&](const Eigen::VectorXd& x) { return assemble_residual(scatter(x), base, data, mesh, dofs); };
    JacobianFn jac = [&](const Eigen::VectorXd& x) { return assemble_jacobian(scatter(x), base, mesh, dofs); };

    StageResult out;
    out.form = Form::conservation;
    out.mesh = mesh;
    Eigen::VectorXd x = run_newton_free(cfg, res, jac, dofs.n_free(), out.newton);
    BurgersDualState converged = scatter(x);
    out.lambda = converged.lambda;
    out.u = primal_gauss_field(converged, base, mesh);
    out.retained_rows = mesh.nt - cfg.n_cut;
    out.retained_extent = mesh.gauss_t(mesh.nt - cfg.n_cut - 1, 1);
    return out;
}

StageResult run_stage(const StageConfig& cfg, const Mesh& mesh, const HJProblemData& data, const HJBase& base,
                      Form form) {
    HJDofMap dofs = make_hj_dof_map(mesh);
    HJDualState state = make_hj_state(mesh);

    auto scatter = [&](const Eigen::VectorXd& xfree) {
        HJDualState s = state;
        for (int k = 0; k < dofs.n_free(); ++k) {
            int dof = dofs.free_to_dof[static_cast<size_t>(k)];
            if (dof % 2 == 0) s.lambda(dof / 2) = xfree(k);
            else s.gamma(dof / 2) = xfree(k);
        }
        return s;
    };
    ResidualFn res = [&](const Eigen::VectorXd& x) { return assemble_residual_hj(scatter(x), base, data, mesh, dofs); };
    JacobianFn jac = [&](const Eigen::VectorXd& x) { return assemble_jacobian_hj(scatter(x), base, mesh, dofs); };

    StageResult out;
    out.form = form;
    out.mesh = mesh;
    Eigen::VectorXd x = run_newton_free(cfg, res, jac, dofs.n_free(), out.newton);
    HJDualState converged = scatter(x);
    out.lambda = converged.lambda;
    out.gamma = converged.gamma;
    HJGaussFields fields = primal_gauss_fields_hj(converged, base, mesh);
    out.u = std::move(fields.u);
    out.Y = std::move(fields.Y);
    out.retained_rows = mesh.nt - cfg.n_cut;
    out.retained_extent = mesh.node_t(mesh.nt - cfg.n_cut);
    return out;
}

CutoffData truncate_and_cutoff(const StageResult& result, const StageConfig& cfg) {
    if (result.form != Form::conservation)
        throw std::invalid_argument("conservation truncate_and_cutoff called on an hj stage");
    const Mesh& mesh = result.mesh;
    int L = mesh.nt - cfg.n_cut - 1;
    CutoffData cut;
    cut.t_f = result.retained_extent;
    cut.u_gauss.resize(static_cast<size_t>(2 * mesh.nx));
    for (int c = 0; c < mesh.nx; ++c) {
        int e = mesh.elem_index(c, L);
        cut.u_gauss[static_cast<size_t>(2 * c)] = result.u[static_cast<size_t>(e * 4 + 2)];
        cut.u_gauss[static_cast<size_t>(2 * c + 1)] = result.u[static_cast<size_t>(e * 4 + 3)];
    }
    return cut;
}

namespace {

// dt_lambda and dx_gamma of the bilinear interpolant at (xi, eta) inside element e.
struct EdgeDerivs {
    double dt_l, dx_g;
};

EdgeDerivs derivs_at(const StageResult& result, int e, double xi, double eta) {
    const Mesh& mesh = result.mesh;
    ShapeEval s = shape_eval(xi, eta);
    EdgeDerivs d{0.0, 0.0};
    const auto& conn = mesh.elements[static_cast<size_t>(e)];
    for (int a = 0; a < 4; ++a) {
        d.dt_l += result.lambda(conn[static_cast<size_t>(a)]) * s.grad[a][1] * (2.0 / mesh.te);
        d.dx_g += result.gamma(conn[static_cast<size_t>(a)]) * s.grad[a][0] * (2.0 / mesh.hx);
    }
    return d;
}

}  // namespace

CutoffData truncate_and_cutoff(const StageResult& result, const StageConfig& cfg, const HJBase& base,
                               const HJProblemData& data, const std::function<double(double)>& ybar_line) {
    if (result.form == Form::conservation)
        throw std::invalid_argument("hj truncate_and_cutoff called on a conservation stage");
    const Mesh& mesh = result.mesh;
    int L = mesh.nt - cfg.n_cut - 1;  // last retained element layer
    CutoffData cut;
    cut.t_f = result.retained_extent;

    LineSamples samples;
    samples.x = line_gauss_points(mesh.nx, mesh.x_lo, mesh.x_hi);
    samples.value.resize(static_cast<size_t>(2 * mesh.nx));
    bool has_above = L + 1 < mesh.nt;
    for (int c = 0; c < mesh.nx; ++c) {
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            EdgeDerivs below = derivs_at(result, mesh.elem_index(c, L), xi, 1.0);
            double dt_l = below.dt_l;
            if (has_above) dt_l = 0.5 * (dt_l + derivs_at(result, mesh.elem_index(c, L + 1), xi, -1.0).dt_l);
            double ybar = ybar_line ? ybar_line(samples.x[static_cast<size_t>(2 * c + q)])
                                    : base.ybar[static_cast<size_t>(mesh.elem_index(c, L) * 4 + 2 + q)];
            samples.value[static_cast<size_t>(2 * c + q)] = ybar + (dt_l + below.dx_g) / base.beta_Y;
        }
    }

    // pin the left node to the known primal boundary value at the cutoff time
    std::vector<NodeConstraint> fixed{{0, data.Yl ? data.Yl(cut.t_f) : 0.0}};
    cut.y_line = l2_project_line(samples, mesh.nx, mesh.x_lo, mesh.x_hi, fixed);
    return cut;
}

BurgersHandoff next_stage_inputs_burgers(const CutoffData& cutoff, const ProblemSpec& problem,
                                         const StageConfig& cfg) {
    BurgersHandoff h;
    h.u0_gauss = cutoff.u_gauss;
    LineSamples samples;
    samples.x = line_gauss_points(cfg.nx, cfg.x_lo, cfg.x_hi);
    samples.value = cutoff.u_gauss;
    std::optional<double> left;
    if (problem.ul) left = problem.flux_sign * problem.ul(cutoff.t_f);
    h.ubar_line = smooth(samples, cfg.nx, cfg.x_lo, cfg.x_hi, cfg.smoothing_eta, left);
    return h;
}

HJHandoff next_stage_inputs_hj(const CutoffData& cutoff) {
    HJHandoff h;
    int n = static_cast<int>(cutoff.y_line.x.size()) - 1;
    std::vector<double> gx = line_gauss_points(n, cutoff.y_line.x.front(), cutoff.y_line.x.back());
    h.Y0_gauss.resize(gx.size());
    for (size_t k = 0; k < gx.size(); ++k) h.Y0_gauss[k] = eval_nodal(cutoff.y_line, gx[k]);
    h.ybar_gauss = h.Y0_gauss;
    h.ubar_gauss = differentiate_nodal_at_gauss(cutoff.y_line).value;
    return h;
}

namespace {

// tile a bottom-line Gauss array (2*nx) over every element of the stage
GaussField tile_line(const Mesh& mesh, const std::vector<double>& line) {
    GaussField f(static_cast<size_t>(mesh.n_elems()) * 4);
    for (int e = 0; e < mesh.n_elems(); ++e) {
        int c = e % mesh.nx;
        for (int q = 0; q < 4; ++q) f[static_cast<size_t>(e * 4 + q)] = line[static_cast<size_t>(2 * c + q % 2)];
    }
    return f;
}

GaussField oracle_field(const Mesh& mesh, BenchmarkKind kind, double nu_base, bool want_Y) {
    PiecewiseQuadratic y0 = initial_Y_pieces(kind);
    GaussField f(static_cast<size_t>(mesh.n_elems()) * 4);
    for (int e = 0; e < mesh.n_elems(); ++e) {
        int c = e % mesh.nx, r = e / mesh.nx;
        for (int q = 0; q < 4; ++q) {
            ViscousPoint p = viscous_solution(y0, nu_base, mesh.gauss_x(c, q % 2), mesh.gauss_t(r, q / 2));
            f[static_cast<size_t>(e * 4 + q)] = want_Y ? p.Y : p.u;
        }
    }
    return f;
}

}  // namespace

Trajectory march(const ProblemSpec& problem, const StageConfig& cfg, double t_final) {
    Trajectory traj;
    traj.problem = problem;
    traj.config = cfg;
    if (!(t_final > 0)) throw std::invalid_argument("march: t_final must be positive");

    const double offset = cutoff_offset(cfg, problem.form);
    const bool viscous_base = cfg.base_mode == BaseStateMode::viscous_exact;
    const std::vector<double> gx = line_gauss_points(cfg.nx, cfg.x_lo, cfg.x_hi);

    // stage-1 data from the problem; replaced by handoffs as stages complete
    std::vector<double> u0_gauss(gx.size()), Y0_gauss(gx.size());
    std::vector<double> ubar_gauss(gx.size()), ybar_gauss(gx.size());
    NodalLine ubar_line;
    if (problem.form == Form::conservation) {
        for (size_t k = 0; k < gx.size(); ++k) u0_gauss[k] = problem.u0(gx[k]);
        LineSamples s{gx, u0_gauss};
        std::optional<double> left;
        if (problem.ul) left = problem.flux_sign * problem.ul(0.0);
        ubar_line = smooth(s, cfg.nx, cfg.x_lo, cfg.x_hi, cfg.smoothing_eta, left);
    } else {
        for (size_t k = 0; k < gx.size(); ++k) {
            Y0_gauss[k] = problem.Y0(gx[k]);
            ybar_gauss[k] = Y0_gauss[k];
            ubar_gauss[k] = problem.u0(gx[k]);
        }
    }

    for (int s = 0;; ++s) {
        if (s >= cfg.max_stages) {
            traj.failure = "max_stages (" + std::to_string(cfg.max_stages) + ") exceeded before reaching t_final";
            return traj;
        }
        const double t_start = s * offset;
        Mesh mesh = build_mesh(cfg.nx, cfg.nt, {cfg.x_lo, cfg.x_hi}, {t_start, t_start + cfg.stage_duration});

        try {
            if (problem.form == Form::conservation) {
                BurgersBase base;
                base.beta_u = cfg.beta_u;
                if (viscous_base) {
                    base.ubar = oracle_field(mesh, problem.kind, cfg.nu_base, false);
                } else {
                    std::vector<double> line(gx.size());
                    for (size_t k = 0; k < gx.size(); ++k) line[k] = eval_nodal(ubar_line, gx[k]);
                    base.ubar = tile_line(mesh, line);
                }
                BurgersProblemData data;
                data.u0 = u0_gauss;
                data.ul = problem.ul;
                data.flux_sign = problem.flux_sign;

                StageResult result = run_stage(cfg, mesh, data, base);
                CutoffData cut = truncate_and_cutoff(result, cfg);
                traj.stages.push_back(std::move(result));
                if (cut.t_f >= t_final) break;
                BurgersHandoff h = next_stage_inputs_burgers(cut, problem, cfg);
                u0_gauss = std::move(h.u0_gauss);
                if (!viscous_base) ubar_line = std::move(h.ubar_line);
            } else {
                HJBase base;
                base.beta_Y = cfg.beta_Y;
                base.beta_u = cfg.beta_u;
                base.nu = problem.form == Form::hj_viscous ? problem.nu : 0.0;
                if (viscous_base) {
                    base.ybar = oracle_field(mesh, problem.kind, cfg.nu_base, true);
                    base.ubar = oracle_field(mesh, problem.kind, cfg.nu_base, false);
                } else {
                    base.ybar = tile_line(mesh, ybar_gauss);
                    base.ubar = tile_line(mesh, ubar_gauss);
                }
                HJProblemData data;
                data.Y0 = Y0_gauss;
                data.Yl = problem.Yl;

                StageResult result = run_stage(cfg, mesh, data, base, problem.form);
                std::function<double(double)> ybar_on_line;
                if (viscous_base) {
                    PiecewiseQuadratic y0 = initial_Y_pieces(problem.kind);
                    double t_f = result.retained_extent;
                    ybar_on_line = [y0, t_f, nu = cfg.nu_base](double x) {
                        return viscous_solution(y0, nu, x, t_f).Y;
                    };
                }
                CutoffData cut = truncate_and_cutoff(result, cfg, base, data, ybar_on_line);
                traj.stages.push_back(std::move(result));
                if (cut.t_f >= t_final) break;
                HJHandoff h = next_stage_inputs_hj(cut);
                Y0_gauss = std::move(h.Y0_gauss);
                ybar_gauss = std::move(h.ybar_gauss);
                ubar_gauss = std::move(h.ubar_gauss);
            }
        } catch (const SolverError& err) {
            traj.failure = "stage " + std::to_string(s + 1) + " failed: " + err.what();
            return traj;
        }
    }
    traj.completed = true;
    return traj;
}

StageProfiles profile_slices(const StageResult& result) {
    const Mesh& mesh = result.mesh;
    StageProfiles out;
    std::vector<double> centers = element_centers(mesh.nx, mesh.x_lo, mesh.x_hi);
    for (int r = 0; r < result.retained_rows; ++r) {
        for (int q = 0; q < 2; ++q) {
            ProfileSlice su;
            su.t = mesh.gauss_t(r, q);
            su.x = centers;
            su.u.resize(centers.size());
            ProfileSlice sy = su;
            for (int c = 0; c < mesh.nx; ++c) {
                int e = mesh.elem_index(c, r);
                su.u[static_cast<size_t>(c)] =
                    0.5 * (result.u[static_cast<size_t>(e * 4 + 2 * q)] + result.u[static_cast<size_t>(e * 4 + 2 * q + 1)]);
                if (!result.Y.empty())
                    sy.u[static_cast<size_t>(c)] =
                        0.5 * (result.Y[static_cast<size_t>(e * 4 + 2 * q)] + result.Y[static_cast<size_t>(e * 4 + 2 * q + 1)]);
            }
            out.u.push_back(std::move(su));
            if (!result.Y.empty()) out.Y.push_back(std::move(sy));
        }
    }
    return out;
}

}  // namespace stburg
