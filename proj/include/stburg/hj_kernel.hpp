#pragma once

// Dual-variable kernel for the Hamilton-Jacobi form. Two dual fields: lambda
// pairs with the evolution equation of Y, gamma with the gradient relation
// u = dY/dx. Viscosity nu >= 0 enters the map, the residual, and the natural
// lateral boundary data; nu = 0 reproduces the inviscid scheme exactly.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "stburg/burgers_kernel.hpp"  // GaussField
#include "stburg/mesh.hpp"
#include "stburg/newton.hpp"

namespace stburg {

struct HJBase {
    GaussField ybar, ubar;  // elem*4 + q
    double beta_Y = 1e6;
    double beta_u = 1e6;
    double nu = 0.0;
};

struct HJProblemData {
    std::vector<double> Y0;            // bottom-edge Gauss samples, 2*nx
    std::function<double(double)> Yl;  // Y(x_lo, t); empty means zero
    // natural lateral data nu*u = f on each side; empty means zero (only read when nu > 0)
    std::function<double(double)> f_left, f_right;
};

// Interleaved dofs: 2*node for lambda, 2*node+1 for gamma.
// lambda fixed on top, gamma fixed on right; optionally lambda also fixed on
// the lateral boundaries (the alternative to the natural viscous condition).
struct HJDofMap {
    std::vector<int> dof_to_free;  // -1 on constrained dofs
    std::vector<int> free_to_dof;
    int n_free() const { return static_cast<int>(free_to_dof.size()); }
    static int lambda_dof(int node) { return 2 * node; }
    static int gamma_dof(int node) { return 2 * node + 1; }
};

HJDofMap make_hj_dof_map(const Mesh& mesh, bool lateral_lambda_fixed = false);

struct HJDualState {
    Eigen::VectorXd lambda, gamma;  // all nodes each
};

HJDualState make_hj_state(const Mesh& mesh, const std::function<double(double)>& lambda_top = {},
                          const std::function<double(double)>& gamma_right = {});

struct HJPrimalPoint {
    double Y, u;
};

// Y = ybar + (dt_lambda + dx_gamma)/beta_Y,
// u = ubar + (gamma - lambda*ubar - nu*dx_lambda)/(beta_u + lambda).
// Throws DegenerateMapError when beta_u + lambda <= beta_u * 1e-8.
HJPrimalPoint dtp_map_hj(double lambda, double gamma, double dt_lambda, double dx_gamma, double dx_lambda,
                         double ybar, double ubar, double beta_Y, double beta_u, double nu);

Eigen::VectorXd assemble_residual_hj(const HJDualState& state, const HJBase& base, const HJProblemData& data,
                                     const Mesh& mesh, const HJDofMap& dofs);

SparseMat assemble_jacobian_hj(const HJDualState& state, const HJBase& base, const Mesh& mesh, const HJDofMap& dofs);

double dual_functional_value_hj(const HJDualState& state, const HJBase& base, const HJProblemData& data,
                                const Mesh& mesh);

struct HJGaussFields {
    GaussField Y, u;
};

HJGaussFields primal_gauss_fields_hj(const HJDualState& state, const HJBase& base, const Mesh& mesh);

// Quadratic form over c = (d_t lambda, d_x lambda, d_t gamma, d_x gamma):
// (c1 + c4)^2 / beta_Y + nu^2 c2^2 / (beta_u + lambda).
Eigen::Matrix4d ellipticity_tensor_hj(double lambda, double beta_Y, double beta_u, double nu);

// Contraction with a space-time normal n = (n_t, n_x) over the field indices.
Eigen::Matrix2d ellipticity_normal_contraction(const Eigen::Matrix4d& A, double n_t, double n_x);

}  // namespace stburg
