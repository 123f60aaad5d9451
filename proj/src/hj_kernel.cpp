#include "stburg/hj_kernel.hpp"

#include <cmath>
#include <string>

#include "stburg/errors.hpp"

namespace stburg {

namespace {

struct PhysShapes {
    std::array<std::array<double, 4>, 4> dx, dt, val;  // [q][a]
};

PhysShapes phys_shapes(const Mesh& mesh) {
    const auto& shapes = quad_shapes();
    PhysShapes p;
    for (int q = 0; q < 4; ++q)
        for (int a = 0; a < 4; ++a) {
            p.val[q][a] = shapes[q].value[a];
            p.dx[q][a] = shapes[q].grad[a][0] * (2.0 / mesh.hx);
            p.dt[q][a] = shapes[q].grad[a][1] * (2.0 / mesh.te);
        }
    return p;
}

struct GaussStateHJ {
    double lam, gam, dt_l, dx_l, dx_g;
    double Y_hat, u_hat, denom;  // denom = beta_u + lambda
};

GaussStateHJ gauss_state(const HJDualState& s, const HJBase& base, const Mesh& mesh, const PhysShapes& ps, int elem,
                         int q) {
    const auto& conn = mesh.elements[static_cast<size_t>(elem)];
    GaussStateHJ g{0, 0, 0, 0, 0, 0, 0, 0};
    for (int a = 0; a < 4; ++a) {
        double la = s.lambda(conn[static_cast<size_t>(a)]);
        double ga = s.gamma(conn[static_cast<size_t>(a)]);
        g.lam += la * ps.val[q][a];
        g.gam += ga * ps.val[q][a];
        g.dt_l += la * ps.dt[q][a];
        g.dx_l += la * ps.dx[q][a];
        g.dx_g += ga * ps.dx[q][a];
    }
    g.denom = base.beta_u + g.lam;
    if (g.denom <= base.beta_u * 1e-8) {
        int c = elem % mesh.nx, r = elem / mesh.nx;
        throw DegenerateMapError("dual-to-primal map degenerate: beta_u + lambda = " + std::to_string(g.denom) +
                                 " at element " + std::to_string(elem) + ", gauss point " + std::to_string(q) +
                                 ", (x,t) = (" + std::to_string(mesh.gauss_x(c, q % 2)) + ", " +
                                 std::to_string(mesh.gauss_t(r, q / 2)) + ")");
    }
    double ybar = base.ybar[static_cast<size_t>(elem * 4 + q)];
    double ubar = base.ubar[static_cast<size_t>(elem * 4 + q)];
    g.Y_hat = ybar + (g.dt_l + g.dx_g) / base.beta_Y;
    g.u_hat = ubar + (g.gam - g.lam * ubar - base.nu * g.dx_l) / g.denom;
    return g;
}

}  // namespace

HJDofMap make_hj_dof_map(const Mesh& mesh, bool lateral_lambda_fixed) {
    HJDofMap map;
    map.dof_to_free.assign(static_cast<size_t>(2 * mesh.n_nodes()), -1);
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        bool lam_fixed = mesh.on_top(n) || (lateral_lambda_fixed && (mesh.on_left(n) || mesh.on_right(n)));
        bool gam_fixed = mesh.on_right(n);
        if (!lam_fixed) {
            map.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(n))] = static_cast<int>(map.free_to_dof.size());
            map.free_to_dof.push_back(HJDofMap::lambda_dof(n));
        }
        if (!gam_fixed) {
            map.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(n))] = static_cast<int>(map.free_to_dof.size());
            map.free_to_dof.push_back(HJDofMap::gamma_dof(n));
        }
    }
    return map;
}

HJDualState make_hj_state(const Mesh& mesh, const std::function<double(double)>& lambda_top,
                          const std::function<double(double)>& gamma_right) {
    HJDualState s;
    s.lambda = Eigen::VectorXd::Zero(mesh.n_nodes());
    s.gamma = Eigen::VectorXd::Zero(mesh.n_nodes());
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        if (mesh.on_top(n) && lambda_top) s.lambda(n) = lambda_top(mesh.node_coords[static_cast<size_t>(n)][0]);
        if (mesh.on_right(n) && gamma_right) s.gamma(n) = gamma_right(mesh.node_coords[static_cast<size_t>(n)][1]);
    }
    return s;
}

HJPrimalPoint dtp_map_hj(double lambda, double gamma, double dt_lambda, double dx_gamma, double dx_lambda,
                         double ybar, double ubar, double beta_Y, double beta_u, double nu) {
    double denom = beta_u + lambda;
    if (denom <= beta_u * 1e-8)
        throw DegenerateMapError("dual-to-primal map degenerate: beta_u + lambda = " + std::to_string(denom));
    HJPrimalPoint p;
    p.Y = ybar + (dt_lambda + dx_gamma) / beta_Y;
    p.u = ubar + (gamma - lambda * ubar - nu * dx_lambda) / denom;
    return p;
}

Eigen::VectorXd assemble_residual_hj(const HJDualState& state, const HJBase& base, const HJProblemData& data,
                                     const Mesh& mesh, const HJDofMap& dofs) {
    const PhysShapes ps = phys_shapes(mesh);
    const double detJ = 0.25 * mesh.hx * mesh.te;
    Eigen::VectorXd R = Eigen::VectorXd::Zero(dofs.n_free());

    for (int e = 0; e < mesh.n_elems(); ++e) {
        const auto& conn = mesh.elements[static_cast<size_t>(e)];
        for (int q = 0; q < 4; ++q) {
            GaussStateHJ g = gauss_state(state, base, mesh, ps, e, q);
            double wdet = quad_rule().weights[static_cast<size_t>(q)] * detJ;
            for (int a = 0; a < 4; ++a) {
                int node = conn[static_cast<size_t>(a)];
                int fl = dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(node))];
                int fg = dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(node))];
                if (fl >= 0)
                    R(fl) += wdet * (-g.Y_hat * ps.dt[q][a] + 0.5 * g.u_hat * g.u_hat * ps.val[q][a] +
                                     base.nu * g.u_hat * ps.dx[q][a]);
                if (fg >= 0) R(fg) += wdet * (-g.Y_hat * ps.dx[q][a] - g.u_hat * ps.val[q][a]);
            }
        }
    }

    // bottom edge: initial Y against the lambda trace
    const double jb = 0.5 * mesh.hx;
    for (int c = 0; c < mesh.nx; ++c) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(c, 0))];
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double y0 = data.Y0[static_cast<size_t>(2 * c + q)];
            double tr[2] = {0.5 * (1.0 - xi), 0.5 * (1.0 + xi)};
            for (int a = 0; a < 2; ++a) {
                int fl = dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(conn[static_cast<size_t>(a)]))];
                if (fl >= 0) R(fl) -= jb * y0 * tr[a];
            }
        }
    }

    // left edge: boundary Y against the gamma trace
    const double jl = 0.5 * mesh.te;
    for (int r = 0; r < mesh.nt; ++r) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(0, r))];
        for (int q = 0; q < 2; ++q) {
            double eta = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double yl = data.Yl ? data.Yl(mesh.gauss_t(r, q)) : 0.0;
            double tr[2] = {0.5 * (1.0 - eta), 0.5 * (1.0 + eta)};
            int locals[2] = {0, 3};
            for (int a = 0; a < 2; ++a) {
                int fg = dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(conn[static_cast<size_t>(locals[a])]))];
                if (fg >= 0) R(fg) -= jl * yl * tr[a];
            }
        }
    }

    // natural lateral data on free lambda (viscous only): contributes
    // +f_left on x = x_lo and -f_right on x = x_hi.
    if (base.nu > 0.0 && (data.f_left || data.f_right)) {
        for (int r = 0; r < mesh.nt; ++r) {
            for (int q = 0; q < 2; ++q) {
                double eta = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
                double tq = mesh.gauss_t(r, q);
                double tr[2] = {0.5 * (1.0 - eta), 0.5 * (1.0 + eta)};
                if (data.f_left) {
                    const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(0, r))];
                    int locals[2] = {0, 3};
                    for (int a = 0; a < 2; ++a) {
                        int fl = dofs.dof_to_free[static_cast<size_t>(
                            HJDofMap::lambda_dof(conn[static_cast<size_t>(locals[a])]))];
                        if (fl >= 0) R(fl) += jl * data.f_left(tq) * tr[a];
                    }
                }
                if (data.f_right) {
                    const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(mesh.nx - 1, r))];
                    int locals[2] = {1, 2};
                    for (int a = 0; a < 2; ++a) {
                        int fl = dofs.dof_to_free[static_cast<size_t>(
                            HJDofMap::lambda_dof(conn[static_cast<size_t>(locals[a])]))];
                        if (fl >= 0) R(fl) -= jl * data.f_right(tq) * tr[a];
                    }
                }
            }
        }
    }
    return R;
}

SparseMat assemble_jacobian_hj(const HJDualState& state, const HJBase& base, const Mesh& mesh, const HJDofMap& dofs) {
    const PhysShapes ps = phys_shapes(mesh);
    const double detJ = 0.25 * mesh.hx * mesh.te;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(mesh.n_elems()) * 64);

    for (int e = 0; e < mesh.n_elems(); ++e) {
        const auto& conn = mesh.elements[static_cast<size_t>(e)];
        for (int q = 0; q < 4; ++q) {
            GaussStateHJ g = gauss_state(state, base, mesh, ps, e, q);
            double wdet = quad_rule().weights[static_cast<size_t>(q)] * detJ;
            // weights of the primal variations: u varies as -(u*N + nu*dxN)/denom
            // along lambda and as N/denom along gamma; Y as (dtN + 0)/beta_Y and dxN/beta_Y.
            double uvar_l[4], uvar_g[4];  // du/d(lambda_b), du/d(gamma_b)
            for (int b = 0; b < 4; ++b) {
                uvar_l[b] = -(g.u_hat * ps.val[q][b] + base.nu * ps.dx[q][b]) / g.denom;
                uvar_g[b] = ps.val[q][b] / g.denom;
            }
            for (int a = 0; a < 4; ++a) {
                int na = conn[static_cast<size_t>(a)];
                int fla = dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(na))];
                int fga = dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(na))];
                // R1 row weight on u: (u*N^A + nu*dxN^A); on Y: -dtN^A
                double r1u = g.u_hat * ps.val[q][a] + base.nu * ps.dx[q][a];
                for (int b = 0; b < 4; ++b) {
                    int nb = conn[static_cast<size_t>(b)];
                    int flb = dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(nb))];
                    int fgb = dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(nb))];
                    if (fla >= 0 && flb >= 0)
                        trips.emplace_back(fla, flb,
                                           wdet * (-ps.dt[q][a] * ps.dt[q][b] / base.beta_Y + r1u * uvar_l[b]));
                    if (fla >= 0 && fgb >= 0)
                        trips.emplace_back(fla, fgb,
                                           wdet * (-ps.dt[q][a] * ps.dx[q][b] / base.beta_Y + r1u * uvar_g[b]));
                    if (fga >= 0 && flb >= 0)
                        trips.emplace_back(fga, flb,
                                           wdet * (-ps.dx[q][a] * ps.dt[q][b] / base.beta_Y - ps.val[q][a] * uvar_l[b]));
                    if (fga >= 0 && fgb >= 0)
                        trips.emplace_back(fga, fgb,
                                           wdet * (-ps.dx[q][a] * ps.dx[q][b] / base.beta_Y - ps.val[q][a] * uvar_g[b]));
                }
            }
        }
    }
    SparseMat J(dofs.n_free(), dofs.n_free());
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

double dual_functional_value_hj(const HJDualState& state, const HJBase& base, const HJProblemData& data,
                                const Mesh& mesh) {
    const PhysShapes ps = phys_shapes(mesh);
    const double detJ = 0.25 * mesh.hx * mesh.te;
    double S = 0.0;

    for (int e = 0; e < mesh.n_elems(); ++e) {
        for (int q = 0; q < 4; ++q) {
            GaussStateHJ g = gauss_state(state, base, mesh, ps, e, q);
            double ybar = base.ybar[static_cast<size_t>(e * 4 + q)];
            double ubar = base.ubar[static_cast<size_t>(e * 4 + q)];
            double qq = g.dt_l + g.dx_g;
            double m = ubar * g.lam - g.gam + base.nu * g.dx_l;
            double wdet = quad_rule().weights[static_cast<size_t>(q)] * detJ;
            S += wdet * (-qq * qq / (2.0 * base.beta_Y) - ybar * qq + 0.5 * g.lam * ubar * ubar - ubar * g.gam +
                         base.nu * ubar * g.dx_l - m * m / (2.0 * g.denom));
        }
    }

    const double jb = 0.5 * mesh.hx;
    for (int c = 0; c < mesh.nx; ++c) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(c, 0))];
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double lam = 0.5 * (1.0 - xi) * state.lambda(conn[0]) + 0.5 * (1.0 + xi) * state.lambda(conn[1]);
            S -= jb * data.Y0[static_cast<size_t>(2 * c + q)] * lam;
        }
    }
    const double jl = 0.5 * mesh.te;
    for (int r = 0; r < mesh.nt; ++r) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(0, r))];
        const auto& connR = mesh.elements[static_cast<size_t>(mesh.elem_index(mesh.nx - 1, r))];
        for (int q = 0; q < 2; ++q) {
            double eta = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double tq = mesh.gauss_t(r, q);
            double trm = 0.5 * (1.0 - eta), trp = 0.5 * (1.0 + eta);
            if (data.Yl) {
                double gam = trm * state.gamma(conn[0]) + trp * state.gamma(conn[3]);
                S -= jl * data.Yl(tq) * gam;
            }
            if (base.nu > 0.0) {
                if (data.f_left) {
                    double lam = trm * state.lambda(conn[0]) + trp * state.lambda(conn[3]);
                    S += jl * data.f_left(tq) * lam;
                }
                if (data.f_right) {
                    double lam = trm * state.lambda(connR[1]) + trp * state.lambda(connR[2]);
                    S -= jl * data.f_right(tq) * lam;
                }
            }
        }
    }
    return S;
}

HJGaussFields primal_gauss_fields_hj(const HJDualState& state, const HJBase& base, const Mesh& mesh) {
    const PhysShapes ps = phys_shapes(mesh);
    HJGaussFields f;
    f.Y.resize(static_cast<size_t>(mesh.n_elems()) * 4);
    f.u.resize(static_cast<size_t>(mesh.n_elems()) * 4);
    for (int e = 0; e < mesh.n_elems(); ++e)
        for (int q = 0; q < 4; ++q) {
            GaussStateHJ g = gauss_state(state, base, mesh, ps, e, q);
            f.Y[static_cast<size_t>(e * 4 + q)] = g.Y_hat;
            f.u[static_cast<size_t>(e * 4 + q)] = g.u_hat;
        }
    return f;
}

Eigen::Matrix4d ellipticity_tensor_hj(double lambda, double beta_Y, double beta_u, double nu) {
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    Eigen::Vector4d r;  // rank-one direction (dt_lambda + dx_gamma)
    r << 1.0, 0.0, 0.0, 1.0;
    A += r * r.transpose() / beta_Y;
    A(1, 1) += nu * nu / (beta_u + lambda);
    return A;
}

Eigen::Matrix2d ellipticity_normal_contraction(const Eigen::Matrix4d& A, double n_t, double n_x) {
    // index pairs: (field, direction) with ordering (lam,t)=0, (lam,x)=1, (gam,t)=2, (gam,x)=3
    double n[2] = {n_t, n_x};
    Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) B(i, j) += A(2 * i + a, 2 * j + b) * n[a] * n[b];
    return B;
}

}  // namespace stburg
