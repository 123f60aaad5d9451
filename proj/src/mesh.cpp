#include "stburg/mesh.hpp"

#include <stdexcept>

namespace stburg {

ShapeEval shape_eval(double xi, double eta) {
    ShapeEval s;
    const double xm = 1.0 - xi, xp = 1.0 + xi;
    const double em = 1.0 - eta, ep = 1.0 + eta;
    s.value = {0.25 * xm * em, 0.25 * xp * em, 0.25 * xp * ep, 0.25 * xm * ep};
    s.grad[0] = {-0.25 * em, -0.25 * xm};
    s.grad[1] = {0.25 * em, -0.25 * xp};
    s.grad[2] = {0.25 * ep, 0.25 * xp};
    s.grad[3] = {-0.25 * ep, 0.25 * xm};
    return s;
}

const QuadRule& quad_rule() {
    static const QuadRule rule = [] {
        const double a = kGaussAbscissa;
        QuadRule r;
        r.points = {{{-a, -a}, {a, -a}, {-a, a}, {a, a}}};
        r.weights = {1.0, 1.0, 1.0, 1.0};
        return r;
    }();
    return rule;
}

const std::array<ShapeEval, 4>& quad_shapes() {
    static const std::array<ShapeEval, 4> shapes = [] {
        const QuadRule& r = quad_rule();
        std::array<ShapeEval, 4> s;
        for (int q = 0; q < 4; ++q) s[q] = shape_eval(r.points[q][0], r.points[q][1]);
        return s;
    }();
    return shapes;
}

Mesh build_mesh(int nx, int nt, std::pair<double, double> x_range, std::pair<double, double> t_range) {
    if (nx <= 0 || nt <= 0) throw std::invalid_argument("build_mesh: element counts must be positive");
    if (!(x_range.second > x_range.first) || !(t_range.second > t_range.first))
        throw std::invalid_argument("build_mesh: degenerate coordinate range");

    Mesh m;
    m.nx = nx;
    m.nt = nt;
    m.x_lo = x_range.first;
    m.x_hi = x_range.second;
    m.t_lo = t_range.first;
    m.t_hi = t_range.second;
    m.hx = (m.x_hi - m.x_lo) / nx;
    m.te = (m.t_hi - m.t_lo) / nt;

    m.node_coords.resize(static_cast<size_t>(m.n_nodes()));
    for (int j = 0; j <= nt; ++j)
        for (int i = 0; i <= nx; ++i) m.node_coords[m.node_index(i, j)] = {m.node_x(i), m.node_t(j)};

    m.elements.resize(static_cast<size_t>(m.n_elems()));
    for (int r = 0; r < nt; ++r)
        for (int c = 0; c < nx; ++c)
            m.elements[m.elem_index(c, r)] = {m.node_index(c, r), m.node_index(c + 1, r),
                                              m.node_index(c + 1, r + 1), m.node_index(c, r + 1)};
    return m;
}

static std::vector<double> gauss_sample_x(const Mesh& mesh) {
    std::vector<double> xs(static_cast<size_t>(2 * mesh.nx));
    for (int c = 0; c < mesh.nx; ++c)
        for (int q = 0; q < 2; ++q) xs[static_cast<size_t>(2 * c + q)] = mesh.gauss_x(c, q);
    return xs;
}

std::vector<Timeline> gauss_timelines(const Mesh& mesh) {
    const std::vector<double> xs = gauss_sample_x(mesh);
    std::vector<Timeline> lines;
    lines.reserve(static_cast<size_t>(2 * mesh.nt));
    for (int r = 0; r < mesh.nt; ++r)
        for (int q = 0; q < 2; ++q) lines.push_back({Timeline::Kind::gauss, mesh.gauss_t(r, q), xs});
    return lines;
}

std::vector<Timeline> nodal_timelines(const Mesh& mesh) {
    std::vector<double> xs(static_cast<size_t>(mesh.nx + 1));
    for (int i = 0; i <= mesh.nx; ++i) xs[static_cast<size_t>(i)] = mesh.node_x(i);
    std::vector<Timeline> lines;
    lines.reserve(static_cast<size_t>(mesh.nt + 1));
    for (int j = 0; j <= mesh.nt; ++j) lines.push_back({Timeline::Kind::nodal, mesh.node_t(j), xs});
    return lines;
}

}  // namespace stburg
