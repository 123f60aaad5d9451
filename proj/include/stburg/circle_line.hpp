#pragma once

// Smallest instance of the duality scheme: intersect the unit circle with the
// vertical line x = alpha by extremizing a dual objective in two multipliers
// around a base point (xbar, ybar). Closed form throughout; exists as
// executable documentation and a regression anchor for the base-state idea.

#include <vector>

namespace stburg {

struct CircleLineProblem {
    double alpha = 0.0;
    double xbar = 0.0, ybar = 1.0;
};

struct CircleLineSolution {
    double lambda, gamma;  // multipliers at the extremum
    double x, y;           // recovered primal point
};

struct CircleLineResult {
    std::vector<CircleLineSolution> solutions;
    // |alpha| = 1 with ybar = 0: the tangent point is recovered by every
    // lambda != -1/2; a single representative (lambda = 0) is returned.
    bool one_parameter_family = false;
};

// Stationary point of the augmented objective in (x, y) for fixed multipliers.
// Requires lambda != -1/2.
void circle_line_dtp(const CircleLineProblem& p, double lambda, double gamma, double& x, double& y);

// Dual objective: the augmented objective evaluated at the mapped point.
// Its gradient in (lambda, gamma) is (x^2 + y^2 - 1, x - alpha).
double circle_line_dual_value(const CircleLineProblem& p, double lambda, double gamma);

// Both extrema in the regular case (|alpha| < 1, ybar != 0), ordered with the
// upper intersection first. Throws std::domain_error when |alpha| > 1 (no
// intersection) or when the base state cannot select a branch (ybar = 0 with
// |alpha| < 1, or ybar != 0 at a tangency |alpha| = 1).
CircleLineResult solve_circle_line(const CircleLineProblem& p);

}  // namespace stburg
