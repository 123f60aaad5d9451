#pragma once

// Entropy solutions of the five benchmark problems, their antiderivative
// fields, the viscous reference solution via the log-transform integral
// representation, and the shock-tracking diagnostics used for comparisons.

#include <array>
#include <string>
#include <vector>

namespace stburg {

enum class BenchmarkKind { fan, shock, double_shock, half_nwave, nwave };

const char* benchmark_name(BenchmarkKind kind);
BenchmarkKind benchmark_from_name(const std::string& name);

// Problem data at t = 0 and on the left boundary x = 0.
double initial_u(BenchmarkKind kind, double x);
double initial_Y(BenchmarkKind kind, double x);
double boundary_u(BenchmarkKind kind, double t);
double boundary_Y(BenchmarkKind kind, double t);

// Inviscid entropy solution; requires t > 0.
double exact_u(BenchmarkKind kind, double x, double t);
double exact_Y(BenchmarkKind kind, double x, double t);

// x-locations of discontinuities and kinks at time t (for exclusion bands).
std::vector<double> kink_locations(BenchmarkKind kind, double t);

// (u_minus + u_plus)/2; throws std::invalid_argument when the states coincide.
double rankine_hugoniot_speed(double u_minus, double u_plus);

// ---- viscous reference ----

// Piecewise quadratic on the whole line: pieces.size() == breaks.size() + 1,
// piece k applies on (breaks[k-1], breaks[k]); coefficients (a, b, c) mean
// a*x^2 + b*x + c.
struct PiecewiseQuadratic {
    std::vector<double> breaks;
    std::vector<std::array<double, 3>> coef;
    double eval(double x) const;
};

PiecewiseQuadratic initial_Y_pieces(BenchmarkKind kind);

struct ViscousPoint {
    double Y = 0, u = 0;
    bool converged = false;
    double achieved_tol = 0;  // relative change at the last refinement
};

// Max-shifted quadrature of the integral representation; requires nu > 0, t > 0.
ViscousPoint viscous_solution(const PiecewiseQuadratic& Y0, double nu, double x, double t, double rel_tol = 1e-8);

double viscous_u(BenchmarkKind kind, double nu, double x, double t);
double viscous_Y(BenchmarkKind kind, double nu, double x, double t);

// ---- diagnostics over reported profiles ----

struct ProfileSlice {
    double t;
    std::vector<double> x, u;  // x ascending
};

struct ShockPoint {
    double t;
    double position;
    double u_minus, u_plus;  // plateau medians left/right of the window
};

struct ShockDiagnostics {
    std::vector<ShockPoint> points;
    std::vector<double> speeds;  // centered differences on positions
};

// Midpoint-crossing tracker. Only admissible (descending) jumps are reported;
// a slice whose plateaus do not satisfy u_minus > u_plus contributes nothing.
ShockDiagnostics estimate_shock_trajectory(const std::vector<ProfileSlice>& slices, double window_lo,
                                           double window_hi);

// First descending crossing of `level` at positions inside [lo, hi]; NaN if none.
double descending_level_crossing(const std::vector<double>& x, const std::vector<double>& u, double level, double lo,
                                 double hi);

// Trapezoid-free quadrature of Gauss samples: h/2 * sum(values).
double conserved_integral(const std::vector<double>& gauss_values, double lo, double hi);

}  // namespace stburg
