#pragma once

// 1-D operations on timeline data: Helmholtz smoothing of Gauss samples into
// a nodal field, constrained L2 projection, per-element differentiation, and
// the Gauss-pair averaging used for every reported profile.

#include <optional>
#include <vector>

namespace stburg {

// Samples at the 2*n Gauss abscissae of a uniform line mesh, x-ordered.
struct LineSamples {
    std::vector<double> x;       // 2*n positions
    std::vector<double> value;   // matching values
};

struct NodalLine {
    std::vector<double> x;       // n+1 node positions
    std::vector<double> value;
};

// Uniform line mesh helper: node and Gauss positions for n elements on [lo, hi].
std::vector<double> line_nodes(int n, double lo, double hi);
std::vector<double> line_gauss_points(int n, double lo, double hi);

// Galerkin solve of v - eta v'' = samples with Dirichlet ends. Boundary
// values: supplied ones win; otherwise each end takes the mean of the
// adjacent element's two Gauss samples.
NodalLine smooth(const LineSamples& samples, int n_elems, double lo, double hi, double eta,
                 std::optional<double> left_value = std::nullopt, std::optional<double> right_value = std::nullopt);

// L2 projection of Gauss samples onto the nodal basis; `fixed` pins listed
// nodes to known values (consistent mass matrix, constrained rows eliminated).
struct NodeConstraint {
    int node;
    double value;
};
NodalLine l2_project_line(const LineSamples& samples, int n_elems, double lo, double hi,
                          const std::vector<NodeConstraint>& fixed = {});

// Per-element slope of the nodal interpolant, constant within each element.
std::vector<double> differentiate_nodal(const NodalLine& line);

// Slope of the nodal interpolant evaluated at the 2*n Gauss abscissae.
LineSamples differentiate_nodal_at_gauss(const NodalLine& line);

// Evaluate a nodal line; positions outside the span clamp to its endpoints.
double eval_nodal(const NodalLine& line, double x);

// Mean of each element's Gauss pair: n values at element centers.
std::vector<double> gauss_pair_average(const LineSamples& samples);

// Element-center positions matching gauss_pair_average.
std::vector<double> element_centers(int n_elems, double lo, double hi);

double total_variation(const std::vector<double>& v);

}  // namespace stburg
