#include "stburg/field_ops.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "stburg/errors.hpp"
#include "stburg/mesh.hpp"  // kGaussAbscissa

namespace stburg {

std::vector<double> line_nodes(int n, double lo, double hi) {
    if (n <= 0 || !(hi > lo)) throw std::invalid_argument("line_nodes: bad mesh");
    double h = (hi - lo) / n;
    std::vector<double> xs(static_cast<size_t>(n + 1));
    for (int i = 0; i <= n; ++i) xs[static_cast<size_t>(i)] = lo + i * h;
    return xs;
}

std::vector<double> line_gauss_points(int n, double lo, double hi) {
    if (n <= 0 || !(hi > lo)) throw std::invalid_argument("line_gauss_points: bad mesh");
    double h = (hi - lo) / n;
    std::vector<double> xs(static_cast<size_t>(2 * n));
    for (int c = 0; c < n; ++c)
        for (int q = 0; q < 2; ++q)
            xs[static_cast<size_t>(2 * c + q)] = lo + c * h + h * (0.5 + (q == 0 ? -1.0 : 1.0) * 0.5 * kGaussAbscissa);
    return xs;
}

namespace {

void check_samples(const LineSamples& s, int n) {
    if (static_cast<int>(s.value.size()) != 2 * n || s.x.size() != s.value.size())
        throw std::invalid_argument("line samples do not match the mesh (need one Gauss pair per element)");
}

// Tridiagonal-as-sparse solve shared by smoothing and projection.
Eigen::VectorXd solve_spd_line(const std::vector<Eigen::Triplet<double>>& trips, const Eigen::VectorXd& rhs) {
    Eigen::SparseMatrix<double> A(rhs.size(), rhs.size());
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("line solve: factorization failed");
    return lu.solve(rhs);
}

}  // namespace

NodalLine smooth(const LineSamples& samples, int n, double lo, double hi, double eta, std::optional<double> left_value,
                 std::optional<double> right_value) {
    check_samples(samples, n);
    if (eta < 0) throw std::invalid_argument("smooth: eta must be nonnegative");
    const double h = (hi - lo) / n;

    double bc_l = left_value ? *left_value : 0.5 * (samples.value[0] + samples.value[1]);
    double bc_r = right_value ? *right_value
                              : 0.5 * (samples.value[samples.value.size() - 2] + samples.value.back());

    // interior system over nodes 1..n-1
    const int m = n - 1;
    NodalLine out;
    out.x = line_nodes(n, lo, hi);
    out.value.assign(static_cast<size_t>(n + 1), 0.0);
    out.value[0] = bc_l;
    out.value[static_cast<size_t>(n)] = bc_r;
    if (m == 0) return out;

    // element matrices: mass h/6 [[2,1],[1,2]], stiffness 1/h [[1,-1],[-1,1]]
    const double me[2][2] = {{2 * h / 6, h / 6}, {h / 6, 2 * h / 6}};
    const double ke[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

    auto row_of = [&](int node) { return (node >= 1 && node <= m) ? node - 1 : -1; };

    for (int c = 0; c < n; ++c) {
        int nodes[2] = {c, c + 1};
        // load vector via the element's Gauss pair
        double bloc[2] = {0, 0};
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double f = samples.value[static_cast<size_t>(2 * c + q)];
            bloc[0] += 0.5 * h * f * 0.5 * (1.0 - xi);
            bloc[1] += 0.5 * h * f * 0.5 * (1.0 + xi);
        }
        for (int a = 0; a < 2; ++a) {
            int ra = row_of(nodes[a]);
            if (ra < 0) continue;
            rhs(ra) += bloc[a];
            for (int b = 0; b < 2; ++b) {
                double entry = me[a][b] + eta * ke[a][b];
                int rb = row_of(nodes[b]);
                if (rb >= 0) trips.emplace_back(ra, rb, entry);
                else rhs(ra) -= entry * (nodes[b] == 0 ? bc_l : bc_r);
            }
        }
    }
    Eigen::VectorXd sol = solve_spd_line(trips, rhs);
    for (int i = 1; i <= m; ++i) out.value[static_cast<size_t>(i)] = sol(i - 1);
    return out;
}

NodalLine l2_project_line(const LineSamples& samples, int n, double lo, double hi,
                          const std::vector<NodeConstraint>& fixed) {
    check_samples(samples, n);
    const double h = (hi - lo) / n;

    std::vector<int> row_of(static_cast<size_t>(n + 1));
    std::vector<double> fixed_value(static_cast<size_t>(n + 1), 0.0);
    for (int i = 0; i <= n; ++i) row_of[static_cast<size_t>(i)] = i;
    for (const NodeConstraint& c : fixed) {
        if (c.node < 0 || c.node > n) throw std::invalid_argument("l2_project_line: constraint outside mesh");
        row_of[static_cast<size_t>(c.node)] = -1;
        fixed_value[static_cast<size_t>(c.node)] = c.value;
    }
    int m = 0;
    for (int i = 0; i <= n; ++i)
        if (row_of[static_cast<size_t>(i)] >= 0) row_of[static_cast<size_t>(i)] = m++;

    const double me[2][2] = {{2 * h / 6, h / 6}, {h / 6, 2 * h / 6}};
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

    for (int c = 0; c < n; ++c) {
        int nodes[2] = {c, c + 1};
        double bloc[2] = {0, 0};
        for (int q = 0; q < 2; ++q) {
            double xi = (q == 0 ? -kGaussAbscissa : kGaussAbscissa);
            double f = samples.value[static_cast<size_t>(2 * c + q)];
            bloc[0] += 0.5 * h * f * 0.5 * (1.0 - xi);
            bloc[1] += 0.5 * h * f * 0.5 * (1.0 + xi);
        }
        for (int a = 0; a < 2; ++a) {
            int ra = row_of[static_cast<size_t>(nodes[a])];
            if (ra < 0) continue;
            rhs(ra) += bloc[a];
            for (int b = 0; b < 2; ++b) {
                int rb = row_of[static_cast<size_t>(nodes[b])];
                if (rb >= 0) trips.emplace_back(ra, rb, me[a][b]);
                else rhs(ra) -= me[a][b] * fixed_value[static_cast<size_t>(nodes[b])];
            }
        }
    }

    NodalLine out;
    out.x = line_nodes(n, lo, hi);
    out.value.assign(static_cast<size_t>(n + 1), 0.0);
    if (m > 0) {
        Eigen::VectorXd sol = solve_spd_line(trips, rhs);
        for (int i = 0; i <= n; ++i)
            out.value[static_cast<size_t>(i)] =
                row_of[static_cast<size_t>(i)] >= 0 ? sol(row_of[static_cast<size_t>(i)]) : fixed_value[static_cast<size_t>(i)];
    } else {
        for (int i = 0; i <= n; ++i) out.value[static_cast<size_t>(i)] = fixed_value[static_cast<size_t>(i)];
    }
    return out;
}

std::vector<double> differentiate_nodal(const NodalLine& line) {
    if (line.x.size() < 2) throw std::invalid_argument("differentiate_nodal: need at least one element");
    std::vector<double> slope(line.x.size() - 1);
    for (size_t c = 0; c + 1 < line.x.size(); ++c)
        slope[c] = (line.value[c + 1] - line.value[c]) / (line.x[c + 1] - line.x[c]);
    return slope;
}

LineSamples differentiate_nodal_at_gauss(const NodalLine& line) {
    std::vector<double> slope = differentiate_nodal(line);
    int n = static_cast<int>(slope.size());
    LineSamples out;
    out.x = line_gauss_points(n, line.x.front(), line.x.back());
    out.value.resize(static_cast<size_t>(2 * n));
    for (int c = 0; c < n; ++c) {
        out.value[static_cast<size_t>(2 * c)] = slope[static_cast<size_t>(c)];
        out.value[static_cast<size_t>(2 * c + 1)] = slope[static_cast<size_t>(c)];
    }
    return out;
}

double eval_nodal(const NodalLine& line, double x) {
    if (line.x.size() < 2) throw std::invalid_argument("eval_nodal: need at least one element");
    size_t n = line.x.size() - 1;
    double lo = line.x.front(), hi = line.x.back();
    double h = (hi - lo) / static_cast<double>(n);
    double s = (x - lo) / h;
    if (s < 0.0) s = 0.0;  // clamp to the span
    if (s > static_cast<double>(n)) s = static_cast<double>(n);
    long c = std::lround(std::floor(s));
    if (c < 0) c = 0;
    if (c >= static_cast<long>(n)) c = static_cast<long>(n) - 1;
    double xi = s - static_cast<double>(c);
    return (1.0 - xi) * line.value[static_cast<size_t>(c)] + xi * line.value[static_cast<size_t>(c + 1)];
}

std::vector<double> gauss_pair_average(const LineSamples& samples) {
    if (samples.value.size() % 2 != 0) throw std::invalid_argument("gauss_pair_average: odd sample count");
    std::vector<double> avg(samples.value.size() / 2);
    for (size_t c = 0; c < avg.size(); ++c) avg[c] = 0.5 * (samples.value[2 * c] + samples.value[2 * c + 1]);
    return avg;
}

std::vector<double> element_centers(int n, double lo, double hi) {
    if (n <= 0 || !(hi > lo)) throw std::invalid_argument("element_centers: bad mesh");
    double h = (hi - lo) / n;
    std::vector<double> xs(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) xs[static_cast<size_t>(c)] = lo + (c + 0.5) * h;
    return xs;
}

double total_variation(const std::vector<double>& v) {
    double tv = 0.0;
    for (size_t k = 1; k < v.size(); ++k) tv += std::abs(v[k] - v[k - 1]);
    return tv;
}

}  // namespace stburg
