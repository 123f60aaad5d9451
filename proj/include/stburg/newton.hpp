#pragma once

// Newton-Raphson driver over assembled residual/Jacobian callbacks, plus the
// sparse direct solve both stage forms share.

#include <Eigen/Sparse>
#include <functional>
#include <vector>

namespace stburg {

using SparseMat = Eigen::SparseMatrix<double>;

struct LinearSystem {
    SparseMat matrix;
    Eigen::VectorXd rhs;
};

// Direct sparse LU. Post: ||Ax - b||_inf / max(1, ||b||_inf) <= 1e-10,
// otherwise SingularMatrixError.
Eigen::VectorXd solve_linear(const LinearSystem& sys);

struct NewtonOptions {
    double tol = 1e-10;        // on the residual max-norm
    int max_iter = 50;
    bool stagnation_exit = true;  // reduction < 1e-3 over 5 iterations counts as converged
};

struct NewtonReport {
    int iterations = 0;
    bool converged = false;
    bool stagnated = false;               // converged via the stagnation exit
    std::vector<double> residual_history;  // max-norm before each update, then final
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<SparseMat(const Eigen::VectorXd&)>;

// Full steps; a step is halved (up to 8 times) only when the trial residual
// max-norm exceeds 10x the current one.
std::pair<Eigen::VectorXd, NewtonReport> newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                                                      Eigen::VectorXd x0, const NewtonOptions& opts = {});

// Central-difference directional derivative check of jacobian() against
// residual(); returns the worst relative mismatch over the supplied
// directions. Shared by the kernel test suites.
double jacobian_consistency(const ResidualFn& residual, const JacobianFn& jacobian, const Eigen::VectorXd& x,
                            const std::vector<Eigen::VectorXd>& directions, double step);

}  // namespace stburg
