#pragma once

// Dual-variable kernel for the conservation form: the primal field u is
// recovered pointwise from the scalar dual field lambda through a convex
// auxiliary potential built around a base state ubar, and the discrete
// residual/Jacobian are those of the dual space-time functional.

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "stburg/mesh.hpp"
#include "stburg/newton.hpp"

namespace stburg {

// Values stored per bulk Gauss point, indexed elem*4 + q (quad_rule order).
using GaussField = std::vector<double>;

struct BurgersBase {
    GaussField ubar;       // elem*4 + q
    double beta_u = 1e6;
};

struct BurgersProblemData {
    std::vector<double> u0;            // bottom-edge Gauss samples, 2*nx, x-ordered
    std::function<double(double)> ul;  // u(x_lo, t); empty means no left flux data
    int flux_sign = +1;                // u(x_lo,t) = flux_sign * ul(t); recorded, flux itself is ul^2/2
};

// lambda fixed on the top and right boundaries; free dofs keep node order.
struct BurgersDofMap {
    std::vector<int> node_to_free;  // -1 on constrained nodes
    std::vector<int> free_to_node;
    int n_free() const { return static_cast<int>(free_to_node.size()); }
};

BurgersDofMap make_burgers_dof_map(const Mesh& mesh);

struct BurgersDualState {
    Eigen::VectorXd lambda;  // all nodes; constrained entries hold prescribed values
};

// Zero free dofs; constrained entries filled from lambda_top(x) / lambda_right(t)
// (empty functions mean zero). The two must agree at the top-right corner.
BurgersDualState make_burgers_state(const Mesh& mesh, const std::function<double(double)>& lambda_top = {},
                                    const std::function<double(double)>& lambda_right = {});

// u = ubar + (ubar*dx_lambda + dt_lambda) / (beta_u - dx_lambda).
// Throws DegenerateMapError when the denominator <= beta_u * 1e-8.
double dtp_map(double dt_lambda, double dx_lambda, double ubar, double beta_u);

Eigen::VectorXd assemble_residual(const BurgersDualState& state, const BurgersBase& base,
                                  const BurgersProblemData& data, const Mesh& mesh, const BurgersDofMap& dofs);

SparseMat assemble_jacobian(const BurgersDualState& state, const BurgersBase& base, const Mesh& mesh,
                            const BurgersDofMap& dofs);

double dual_functional_value(const BurgersDualState& state, const BurgersBase& base, const BurgersProblemData& data,
                             const Mesh& mesh);

// Mapped primal u at every bulk Gauss point.
GaussField primal_gauss_field(const BurgersDualState& state, const BurgersBase& base, const Mesh& mesh);

// [[1, u], [u, u^2]] / (beta_u - dx_lambda); PSD on the admissible set.
Eigen::Matrix2d ellipticity_matrix(double dx_lambda, double u_hat, double beta_u);

}  // namespace stburg
