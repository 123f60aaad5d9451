#include "stburg/burgers_kernel.hpp"

#include <cmath>
#include <string>

#include "stburg/errors.hpp"

namespace stburg {

namespace {

// Physical shape gradients on a structured element: dN/dx, dN/dt.
struct PhysShapes {
    std::array<std::array<double, 4>, 4> dx;   // [q][a]
    std::array<std::array<double, 4>, 4> dt;
    std::array<std::array<double, 4>, 4> val;
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

[[noreturn]] void throw_degenerate(double denom, double beta_u, int elem, int q, double x, double t) {
    throw DegenerateMapError("dual-to-primal map degenerate: beta_u - dx_lambda = " + std::to_string(denom) +
                             " (beta_u = " + std::to_string(beta_u) + ") at element " + std::to_string(elem) +
                             ", gauss point " + std::to_string(q) + ", (x,t) = (" + std::to_string(x) + ", " +
                             std::to_string(t) + ")");
}

}  // namespace

BurgersDofMap make_burgers_dof_map(const Mesh& mesh) {
    BurgersDofMap map;
    map.node_to_free.assign(static_cast<size_t>(mesh.n_nodes()), -1);
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        if (mesh.on_top(n) || mesh.on_right(n)) continue;
        map.node_to_free[static_cast<size_t>(n)] = static_cast<int>(map.free_to_node.size());
        map.free_to_node.push_back(n);
    }
    return map;
}

BurgersDualState make_burgers_state(const Mesh& mesh, const std::function<double(double)>& lambda_top,
                                    const std::function<double(double)>& lambda_right) {
    BurgersDualState s;
    s.lambda = Eigen::VectorXd::Zero(mesh.n_nodes());
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        if (mesh.on_top(n) && lambda_top) s.lambda(n) = lambda_top(mesh.node_coords[static_cast<size_t>(n)][0]);
        else if (mesh.on_right(n) && lambda_right) s.lambda(n) = lambda_right(mesh.node_coords[static_cast<size_t>(n)][1]);
    }
    return s;
}

double dtp_map(double dt_lambda, double dx_lambda, double ubar, double beta_u) {
    double denom = beta_u - dx_lambda;
    if (denom <= beta_u * 1e-8)
        throw DegenerateMapError("dual-to-primal map degenerate: beta_u - dx_lambda = " + std::to_string(denom));
    return ubar + (ubar * dx_lambda + dt_lambda) / denom;
}

// One fused loop serves residual, Jacobian, functional, and primal recovery.
// mode flags keep the quadrature walk identical in every use.
namespace {

struct GaussState {
    double dt_l, dx_l, u_hat, denom;
};

GaussState gauss_state(const Eigen::VectorXd& lambda, const BurgersBase& base, const Mesh& mesh,
                       const PhysShapes& ps, int elem, int q) {
    const auto& conn = mesh.elements[static_cast<size_t>(elem)];
    GaussState g{0.0, 0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
        double la = lambda(conn[static_cast<size_t>(a)]);
        g.dt_l += la * ps.dt[q][a];
        g.dx_l += la * ps.dx[q][a];
    }
    g.denom = base.beta_u - g.dx_l;
    if (g.denom <= base.beta_u * 1e-8) {
        int c = elem % mesh.nx, r = elem / mesh.nx;
        throw_degenerate(g.denom, base.beta_u, elem, q, mesh.gauss_x(c, q % 2), mesh.gauss_t(r, q / 2));
    }
    double ubar = base.ubar[static_cast<size_t>(elem * 4 + q)];
    g.u_hat = ubar + (ubar * g.dx_l + g.dt_l) / g.denom;
    return g;
}

}  // namespace

Eigen::VectorXd assemble_residual(const BurgersDualState& state, const BurgersBase& base,
                                  const BurgersProblemData& data, const Mesh& mesh, const BurgersDofMap& dofs) {
    const PhysShapes ps = phys_shapes(mesh);
    const double detJ = 0.25 * mesh.hx * mesh.te;
    Eigen::VectorXd R = Eigen::VectorXd::Zero(dofs.n_free());

    for (int e = 0; e < mesh.n_elems(); ++e) {
        const auto& conn = mesh.elements[static_cast<size_t>(e)];
        for (int q = 0; q < 4; ++q) {
            GaussState g = gauss_state(state.lambda, base, mesh, ps, e, q);
            double wdet = quad_rule().weights[static_cast<size_t>(q)] * detJ;
            for (int a = 0; a < 4; ++a) {
                int fr = dofs.node_to_free[static_cast<size_t>(conn[static_cast<size_t>(a)])];
                if (fr < 0) continue;
                R(fr) += wdet * (-g.u_hat * ps.dt[q][a] - 0.5 * g.u_hat * g.u_hat * ps.dx[q][a]);
            }
        }
    }

    // bottom edge: initial-condition pairing with the trace of the test function
    const double jb = 0.5 * mesh.hx;
    for (int c = 0; c < mesh.nx; ++c) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(c, 0))];
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double u0 = data.u0[static_cast<size_t>(2 * c + q)];
            double tr[2] = {0.5 * (1.0 - xi), 0.5 * (1.0 + xi)};  // locals 0,1
            for (int a = 0; a < 2; ++a) {
                int fr = dofs.node_to_free[static_cast<size_t>(conn[static_cast<size_t>(a)])];
                if (fr >= 0) R(fr) -= jb * u0 * tr[a];
            }
        }
    }

    // left edge: prescribed flux ul^2/2
    if (data.ul) {
        const double jl = 0.5 * mesh.te;
        for (int r = 0; r < mesh.nt; ++r) {
            const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(0, r))];
            for (int q = 0; q < 2; ++q) {
                double eta = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
                double ul = data.ul(mesh.gauss_t(r, q));
                double tr[2] = {0.5 * (1.0 - eta), 0.5 * (1.0 + eta)};  // locals 0,3
                int locals[2] = {0, 3};
                for (int a = 0; a < 2; ++a) {
                    int fr = dofs.node_to_free[static_cast<size_t>(conn[static_cast<size_t>(locals[a])])];
                    if (fr >= 0) R(fr) -= jl * 0.5 * ul * ul * tr[a];
                }
            }
        }
    }
    return R;
}

SparseMat assemble_jacobian(const BurgersDualState& state, const BurgersBase& base, const Mesh& mesh,
                            const BurgersDofMap& dofs) {
    const PhysShapes ps = phys_shapes(mesh);
    const double detJ = 0.25 * mesh.hx * mesh.te;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(mesh.n_elems()) * 16);

    for (int e = 0; e < mesh.n_elems(); ++e) {
        const auto& conn = mesh.elements[static_cast<size_t>(e)];
        for (int q = 0; q < 4; ++q) {
            GaussState g = gauss_state(state.lambda, base, mesh, ps, e, q);
            double wdet = quad_rule().weights[static_cast<size_t>(q)] * detJ;
            // d u / d lambda_B contracts the same characteristic combination both ways
            double comb[4];
            for (int a = 0; a < 4; ++a) comb[a] = ps.dt[q][a] + g.u_hat * ps.dx[q][a];
            for (int a = 0; a < 4; ++a) {
                int fr = dofs.node_to_free[static_cast<size_t>(conn[static_cast<size_t>(a)])];
                if (fr < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    int fc = dofs.node_to_free[static_cast<size_t>(conn[static_cast<size_t>(b)])];
                    if (fc < 0) continue;
                    trips.emplace_back(fr, fc, -wdet * comb[a] * comb[b] / g.denom);
                }
            }
        }
    }
    SparseMat J(dofs.n_free(), dofs.n_free());
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

double dual_functional_value(const BurgersDualState& state, const BurgersBase& base, const BurgersProblemData& data,
                             const Mesh& mesh) {
    const PhysShapes ps = phys_shapes(mesh);
    const double detJ = 0.25 * mesh.hx * mesh.te;
    double S = 0.0;

    for (int e = 0; e < mesh.n_elems(); ++e) {
        for (int q = 0; q < 4; ++q) {
            GaussState g = gauss_state(state.lambda, base, mesh, ps, e, q);
            double ubar = base.ubar[static_cast<size_t>(e * 4 + q)];
            double qc = g.dt_l + ubar * g.dx_l;  // characteristic derivative of lambda
            double wdet = quad_rule().weights[static_cast<size_t>(q)] * detJ;
            S += wdet * (-qc * qc / (2.0 * g.denom) - ubar * g.dt_l - 0.5 * ubar * ubar * g.dx_l);
        }
    }

    const double jb = 0.5 * mesh.hx;
    for (int c = 0; c < mesh.nx; ++c) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(c, 0))];
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double lam = 0.5 * (1.0 - xi) * state.lambda(conn[0]) + 0.5 * (1.0 + xi) * state.lambda(conn[1]);
            S -= jb * data.u0[static_cast<size_t>(2 * c + q)] * lam;
        }
    }
    if (data.ul) {
        const double jl = 0.5 * mesh.te;
        for (int r = 0; r < mesh.nt; ++r) {
            const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(0, r))];
            for (int q = 0; q < 2; ++q) {
                double eta = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
                double ul = data.ul(mesh.gauss_t(r, q));
                double lam = 0.5 * (1.0 - eta) * state.lambda(conn[0]) + 0.5 * (1.0 + eta) * state.lambda(conn[3]);
                S -= jl * 0.5 * ul * ul * lam;
            }
        }
    }
    return S;
}

GaussField primal_gauss_field(const BurgersDualState& state, const BurgersBase& base, const Mesh& mesh) {
    const PhysShapes ps = phys_shapes(mesh);
    GaussField u(static_cast<size_t>(mesh.n_elems()) * 4);
    for (int e = 0; e < mesh.n_elems(); ++e)
        for (int q = 0; q < 4; ++q) u[static_cast<size_t>(e * 4 + q)] = gauss_state(state.lambda, base, mesh, ps, e, q).u_hat;
    return u;
}

Eigen::Matrix2d ellipticity_matrix(double dx_lambda, double u_hat, double beta_u) {
    Eigen::Matrix2d A;
    A << 1.0, u_hat, u_hat, u_hat * u_hat;
    return A / (beta_u - dx_lambda);
}

}  // namespace stburg
