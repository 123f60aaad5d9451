#pragma once

// Structured space-time mesh on a rectangle: bilinear quads, 2x2 Gauss
// quadrature, and the timeline bookkeeping the stage marcher relies on.
//
// Conventions used everywhere downstream:
//  * nodes are numbered row-major, x fastest, bottom row first;
//  * element (c, r) covers column c, time layer r, index r*nx + c;
//  * local corners run counterclockwise from the bottom-left;
//  * the reference square is [-1,1]^2 with xi -> x and eta -> t.

#include <array>
#include <utility>
#include <vector>

namespace stburg {

inline constexpr double kGaussAbscissa = 0.57735026918962576451;  // 1/sqrt(3)

// Values and reference gradients of the four bilinear shape functions.
struct ShapeEval {
    std::array<double, 4> value;
    std::array<std::array<double, 2>, 4> grad;  // [node][d/dxi, d/deta]
};

ShapeEval shape_eval(double xi, double eta);

// 2x2 tensor Gauss rule, points ordered row-major by eta then xi:
// q0 = (-a,-a), q1 = (+a,-a), q2 = (-a,+a), q3 = (+a,+a).
struct QuadRule {
    std::array<std::array<double, 2>, 4> points;
    std::array<double, 4> weights;
};

const QuadRule& quad_rule();

// Shape evaluations at the four bulk Gauss points, precomputed once.
const std::array<ShapeEval, 4>& quad_shapes();

struct Mesh {
    int nx = 0, nt = 0;
    double x_lo = 0, x_hi = 0, t_lo = 0, t_hi = 0;
    double hx = 0;  // element width
    double te = 0;  // element height (time)

    std::vector<std::array<double, 2>> node_coords;   // (x, t), row-major
    std::vector<std::array<int, 4>> elements;         // CCW from bottom-left

    int n_nodes() const { return (nx + 1) * (nt + 1); }
    int n_elems() const { return nx * nt; }

    int node_index(int i, int j) const { return j * (nx + 1) + i; }
    int elem_index(int c, int r) const { return r * nx + c; }

    double node_x(int i) const { return x_lo + i * hx; }
    double node_t(int j) const { return t_lo + j * te; }

    // x of Gauss column q (0 left, 1 right) inside element column c.
    double gauss_x(int c, int q) const {
        return x_lo + c * hx + hx * (0.5 + (q == 0 ? -1.0 : 1.0) * (0.5 * kGaussAbscissa));
    }
    // t of Gauss row q (0 lower, 1 upper) inside element layer r.
    double gauss_t(int r, int q) const {
        return t_lo + r * te + te * (0.5 + (q == 0 ? -1.0 : 1.0) * (0.5 * kGaussAbscissa));
    }

    bool on_left(int node) const { return node % (nx + 1) == 0; }
    bool on_right(int node) const { return node % (nx + 1) == nx; }
    bool on_bottom(int node) const { return node / (nx + 1) == 0; }
    bool on_top(int node) const { return node / (nx + 1) == nt; }
};

// Throws std::invalid_argument on non-positive counts or degenerate ranges.
Mesh build_mesh(int nx, int nt, std::pair<double, double> x_range, std::pair<double, double> t_range);

struct Timeline {
    enum class Kind { nodal, gauss };
    Kind kind;
    double time;
    std::vector<double> sample_x;
};

// The 2*nt Gauss-row timelines, strictly increasing in time; sample_x holds
// the 2*nx Gauss abscissae shared by every line.
std::vector<Timeline> gauss_timelines(const Mesh& mesh);

// The nt+1 node-row timelines; times bit-equal to node coordinates.
std::vector<Timeline> nodal_timelines(const Mesh& mesh);

}  // namespace stburg
