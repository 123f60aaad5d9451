#include "stburg/newton.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "stburg/errors.hpp"

namespace stburg {

Eigen::VectorXd solve_linear(const LinearSystem& sys) {
    const SparseMat& A = sys.matrix;
    if (A.rows() != A.cols() || A.rows() != sys.rhs.size())
        throw SolverError("solve_linear: shape mismatch");

    // A structurally empty row can never be factorized; report it directly.
    std::vector<char> row_seen(static_cast<size_t>(A.rows()), 0);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMat::InnerIterator it(A, k); it; ++it) row_seen[static_cast<size_t>(it.row())] = 1;
    for (long r = 0; r < A.rows(); ++r)
        if (!row_seen[static_cast<size_t>(r)])
            throw SingularMatrixError("solve_linear: structurally empty row " + std::to_string(r), r);

    Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        // Eigen's message names the column at which factorization stopped.
        std::string msg = lu.lastErrorMessage();
        long pivot = -1;
        size_t pos = msg.find_last_not_of("0123456789");
        if (pos != std::string::npos && pos + 1 < msg.size()) pivot = std::stol(msg.substr(pos + 1));
        throw SingularMatrixError("solve_linear: factorization failed (" + msg + ")", pivot);
    }
    Eigen::VectorXd x = lu.solve(sys.rhs);

    double denom = std::max(1.0, sys.rhs.lpNorm<Eigen::Infinity>());
    double rel = (A * x - sys.rhs).lpNorm<Eigen::Infinity>() / denom;
    if (!(rel <= 1e-10))
        throw SingularMatrixError("solve_linear: residual " + std::to_string(rel) + " exceeds 1e-10", -1);
    return x;
}

std::pair<Eigen::VectorXd, NewtonReport> newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                                                      Eigen::VectorXd x, const NewtonOptions& opts) {
    NewtonReport report;
    Eigen::VectorXd r = residual(x);
    double d = r.lpNorm<Eigen::Infinity>();
    report.residual_history.push_back(d);

    for (int it = 0; it < opts.max_iter; ++it) {
        if (d < opts.tol) {
            report.converged = true;
            return {x, report};
        }
        if (opts.stagnation_exit && it >= 5) {
            double prev = report.residual_history[report.residual_history.size() - 6];
            if (prev > 0 && (prev - d) / prev < 1e-3) {
                report.converged = true;
                report.stagnated = true;
                return {x, report};
            }
        }

        Eigen::VectorXd dx = solve_linear({jacobian(x), -r});
        Eigen::VectorXd x_trial = x + dx;
        Eigen::VectorXd r_trial = residual(x_trial);
        double d_trial = r_trial.lpNorm<Eigen::Infinity>();
        for (int h = 0; h < 8 && d_trial > 10.0 * d; ++h) {
            dx *= 0.5;
            x_trial = x + dx;
            r_trial = residual(x_trial);
            d_trial = r_trial.lpNorm<Eigen::Infinity>();
        }

        x = std::move(x_trial);
        r = std::move(r_trial);
        d = d_trial;
        report.iterations = it + 1;
        report.residual_history.push_back(d);
    }

    report.converged = d < opts.tol;
    return {x, report};
}

double jacobian_consistency(const ResidualFn& residual, const JacobianFn& jacobian, const Eigen::VectorXd& x,
                            const std::vector<Eigen::VectorXd>& directions, double step) {
    SparseMat J = jacobian(x);
    double worst = 0.0;
    for (const Eigen::VectorXd& v : directions) {
        Eigen::VectorXd fd = (residual(x + step * v) - residual(x - step * v)) / (2.0 * step);
        Eigen::VectorXd jv = J * v;
        double scale = std::max({1e-14, fd.lpNorm<Eigen::Infinity>(), jv.lpNorm<Eigen::Infinity>()});
        worst = std::max(worst, (fd - jv).lpNorm<Eigen::Infinity>() / scale);
    }
    return worst;
}

}  // namespace stburg
