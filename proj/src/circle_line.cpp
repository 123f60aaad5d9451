#include "stburg/circle_line.hpp"

#include <cmath>
#include <stdexcept>

namespace stburg {

void circle_line_dtp(const CircleLineProblem& p, double lambda, double gamma, double& x, double& y) {
    double d = 1.0 + 2.0 * lambda;
    if (d == 0.0) throw std::domain_error("map undefined at lambda = -1/2");
    x = (p.xbar - gamma) / d;
    y = p.ybar / d;
}

double circle_line_dual_value(const CircleLineProblem& p, double lambda, double gamma) {
    double x, y;
    circle_line_dtp(p, lambda, gamma, x, y);
    return lambda * (x * x + y * y - 1.0) + gamma * (x - p.alpha) + 0.5 * (x - p.xbar) * (x - p.xbar) +
           0.5 * (y - p.ybar) * (y - p.ybar);
}

CircleLineResult solve_circle_line(const CircleLineProblem& p) {
    if (!(std::abs(p.alpha) <= 1.0)) throw std::domain_error("no intersection: |alpha| > 1");

    CircleLineResult out;
    if (std::abs(p.alpha) == 1.0) {
        if (p.ybar != 0.0)
            throw std::domain_error("tangent point unreachable: ybar must be 0 when |alpha| = 1");
        out.one_parameter_family = true;
        out.solutions.push_back({0.0, p.xbar - p.alpha, p.alpha, 0.0});
        return out;
    }
    if (p.ybar == 0.0)
        throw std::domain_error("degenerate base state: ybar = 0 cannot select a branch");

    double h = std::sqrt(1.0 - p.alpha * p.alpha);
    for (double y_target : {h, -h}) {
        double d = p.ybar / y_target;  // 1 + 2*lambda
        double lambda = 0.5 * (d - 1.0);
        double gamma = p.xbar - p.alpha * d;
        double x, y;
        circle_line_dtp(p, lambda, gamma, x, y);
        out.solutions.push_back({lambda, gamma, x, y});
    }
    return out;
}

}  // namespace stburg
