#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "stburg/errors.hpp"
#include "stburg/hj_kernel.hpp"

using namespace stburg;

namespace {

struct PointState {
    double lam, gam, dt_l, dx_l, dt_g, dx_g;
};

PointState interp(const HJDualState& state, const Mesh& mesh, int e, double xi, double eta) {
    ShapeEval s = shape_eval(xi, eta);
    const auto& conn = mesh.elements[static_cast<size_t>(e)];
    PointState p{0, 0, 0, 0, 0, 0};
    for (int a = 0; a < 4; ++a) {
        double l = state.lambda(conn[static_cast<size_t>(a)]);
        double g = state.gamma(conn[static_cast<size_t>(a)]);
        p.lam += l * s.value[a];
        p.gam += g * s.value[a];
        p.dx_l += l * s.grad[a][0] * 2.0 / mesh.hx;
        p.dt_l += l * s.grad[a][1] * 2.0 / mesh.te;
        p.dx_g += g * s.grad[a][0] * 2.0 / mesh.hx;
        p.dt_g += g * s.grad[a][1] * 2.0 / mesh.te;
    }
    return p;
}

// Re-derivation of the residual as plain loops, for cross-checking assembly.
Eigen::VectorXd reference_residual(const HJDualState& state, const HJBase& base, const HJProblemData& data,
                                   const Mesh& mesh, const HJDofMap& dofs) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dofs.n_free());
    const double g = kGaussAbscissa;
    const double pts[2] = {-g, g};
    auto free_l = [&](int node) { return dofs.dof_to_free[static_cast<size_t>(2 * node)]; };
    auto free_g = [&](int node) { return dofs.dof_to_free[static_cast<size_t>(2 * node + 1)]; };

    for (int e = 0; e < mesh.n_elems(); ++e) {
        const auto& conn = mesh.elements[static_cast<size_t>(e)];
        for (int qe = 0; qe < 2; ++qe) {
            for (int qx = 0; qx < 2; ++qx) {
                PointState p = interp(state, mesh, e, pts[qx], pts[qe]);
                size_t qi = static_cast<size_t>(e * 4 + qe * 2 + qx);
                HJPrimalPoint pr = dtp_map_hj(p.lam, p.gam, p.dt_l, p.dx_g, p.dx_l, base.ybar[qi], base.ubar[qi],
                                              base.beta_Y, base.beta_u, base.nu);
                double jac = mesh.hx * mesh.te / 4.0;
                ShapeEval s = shape_eval(pts[qx], pts[qe]);
                for (int a = 0; a < 4; ++a) {
                    double dtn = s.grad[a][1] * 2.0 / mesh.te, dxn = s.grad[a][0] * 2.0 / mesh.hx;
                    int fl = free_l(conn[static_cast<size_t>(a)]), fg = free_g(conn[static_cast<size_t>(a)]);
                    if (fl >= 0)
                        r(fl) += jac * (-pr.Y * dtn + 0.5 * pr.u * pr.u * s.value[a] + base.nu * pr.u * dxn);
                    if (fg >= 0) r(fg) += jac * (-pr.Y * dxn - pr.u * s.value[a]);
                }
            }
        }
    }
    for (int c = 0; c < mesh.nx; ++c) {
        const auto& conn = mesh.elements[static_cast<size_t>(mesh.elem_index(c, 0))];
        for (int q = 0; q < 2; ++q) {
            double n0 = 0.5 * (1.0 - pts[q]), n1 = 0.5 * (1.0 + pts[q]);
            double y0 = data.Y0[static_cast<size_t>(2 * c + q)];
            if (free_l(conn[0]) >= 0) r(free_l(conn[0])) -= y0 * n0 * mesh.hx / 2.0;
            if (free_l(conn[1]) >= 0) r(free_l(conn[1])) -= y0 * n1 * mesh.hx / 2.0;
        }
    }
    for (int row = 0; row < mesh.nt; ++row) {
        const auto& west = mesh.elements[static_cast<size_t>(mesh.elem_index(0, row))];
        const auto& east = mesh.elements[static_cast<size_t>(mesh.elem_index(mesh.nx - 1, row))];
        for (int q = 0; q < 2; ++q) {
            double n0 = 0.5 * (1.0 - pts[q]), n1 = 0.5 * (1.0 + pts[q]);
            double tq = mesh.gauss_t(row, q);
            double yl = data.Yl ? data.Yl(tq) : 0.0;
            if (free_g(west[0]) >= 0) r(free_g(west[0])) -= yl * n0 * mesh.te / 2.0;
            if (free_g(west[3]) >= 0) r(free_g(west[3])) -= yl * n1 * mesh.te / 2.0;
            if (base.nu > 0.0 && data.f_left) {
                if (free_l(west[0]) >= 0) r(free_l(west[0])) += data.f_left(tq) * n0 * mesh.te / 2.0;
                if (free_l(west[3]) >= 0) r(free_l(west[3])) += data.f_left(tq) * n1 * mesh.te / 2.0;
            }
            if (base.nu > 0.0 && data.f_right) {
                if (free_l(east[1]) >= 0) r(free_l(east[1])) -= data.f_right(tq) * n0 * mesh.te / 2.0;
                if (free_l(east[2]) >= 0) r(free_l(east[2])) -= data.f_right(tq) * n1 * mesh.te / 2.0;
            }
        }
    }
    return r;
}

GaussField constant_field(const Mesh& mesh, double v) {
    return GaussField(static_cast<size_t>(mesh.n_elems()) * 4, v);
}

struct RandomSetup {
    HJDualState state;
    HJBase base;
    HJProblemData data;
};

RandomSetup random_setup(const Mesh& mesh, std::mt19937& rng, double nu) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    RandomSetup rs{make_hj_state(mesh), {}, {}};
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        rs.state.lambda(n) = 0.6 * unif(rng);
        rs.state.gamma(n) = 0.6 * unif(rng);
    }
    rs.base.beta_Y = 20.0 + 5.0 * unif(rng);
    rs.base.beta_u = 25.0 + 5.0 * unif(rng);
    rs.base.nu = nu;
    rs.base.ybar = constant_field(mesh, 0.0);
    rs.base.ubar = constant_field(mesh, 0.0);
    for (double& v : rs.base.ybar) v = unif(rng);
    for (double& v : rs.base.ubar) v = unif(rng);
    rs.data.Y0.resize(static_cast<size_t>(2 * mesh.nx));
    for (double& v : rs.data.Y0) v = unif(rng);
    rs.data.Yl = [](double t) { return 0.3 * std::sin(2 * t); };
    rs.data.f_left = [](double t) { return 0.2 * std::cos(t); };
    rs.data.f_right = [](double t) { return -0.1 + 0.05 * t; };
    return rs;
}

}  // namespace

TEST_SUITE("hj_kernel") {

TEST_CASE("map reduces to the base state on a zero dual field") {
    HJPrimalPoint p = dtp_map_hj(0, 0, 0, 0, 0, 2.5, -0.75, 1e6, 1e6, 0.0);
    CHECK(p.Y == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(p.u == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("map worked examples") {
    // gamma alone drives u: u = (gamma - 0 - 0) / (beta_u + 0)
    HJPrimalPoint p1 = dtp_map_hj(0, 1.0, 0, 0, 0, 0, 0, 1e6, 2.0, 0.0);
    CHECK(p1.u == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p1.Y == doctest::Approx(0.0).epsilon(1e-15));
    // the viscous term enters u through -nu * dx_lambda
    HJPrimalPoint p2 = dtp_map_hj(0, 0, 0, 0, 1.0, 0, 0, 1e6, 1.0, 1e-3);
    CHECK(p2.u == doctest::Approx(-1e-3).epsilon(1e-12));
    // Y responds to dt_lambda + dx_gamma
    HJPrimalPoint p3 = dtp_map_hj(0, 0, 3.0, 1.0, 0, 0.5, 0, 8.0, 1e6, 0.0);
    CHECK(p3.Y == doctest::Approx(0.5 + 4.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("map throws when beta_u + lambda degenerates") {
    CHECK_THROWS_AS(dtp_map_hj(-10.0, 0, 0, 0, 0, 0, 0, 1e6, 10.0, 0.0), DegenerateMapError);
    CHECK_THROWS_AS(dtp_map_hj(-10.0 + 10.0 * 1e-8, 0, 0, 0, 0, 0, 0, 1e6, 10.0, 0.0), DegenerateMapError);
    CHECK_NOTHROW(dtp_map_hj(-10.0 + 10.0 * 1e-7, 0, 0, 0, 0, 0, 0, 1e6, 10.0, 0.0));
}

TEST_CASE("dof map: lambda fixed on top, gamma fixed on right") {
    Mesh mesh = build_mesh(3, 2, {0, 1}, {0, 1});
    HJDofMap dofs = make_hj_dof_map(mesh);
    CHECK(dofs.n_free() == 2 * mesh.n_nodes() - (mesh.nx + 1) - (mesh.nt + 1));
    for (int i = 0; i <= 3; ++i)
        CHECK(dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(mesh.node_index(i, 2)))] == -1);
    for (int j = 0; j <= 2; ++j)
        CHECK(dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(mesh.node_index(3, j)))] == -1);
    CHECK(dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(mesh.node_index(3, 2)))] == -1);
    CHECK(dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(mesh.node_index(0, 0)))] >= 0);

    HJDofMap lat = make_hj_dof_map(mesh, true);
    CHECK(lat.n_free() == dofs.n_free() - 2 * mesh.nt);  // lateral lambda below the top row
    for (int j = 0; j < 2; ++j) {
        CHECK(lat.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(mesh.node_index(0, j)))] == -1);
        CHECK(lat.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(mesh.node_index(3, j)))] == -1);
    }
}

TEST_CASE("residual vanishes for a constant Y state") {
    for (double nu : {0.0, 0.3}) {
        Mesh mesh = build_mesh(3, 2, {0, 1}, {0, 0.5});
        HJDofMap dofs = make_hj_dof_map(mesh);
        HJDualState state = make_hj_state(mesh);
        const double c = 1.7;
        HJBase base{constant_field(mesh, c), constant_field(mesh, 0.0), 1e6, 1e6, nu};
        HJProblemData data;
        data.Y0.assign(static_cast<size_t>(2 * mesh.nx), c);
        data.Yl = [c](double) { return c; };
        Eigen::VectorXd r = assemble_residual_hj(state, base, data, mesh, dofs);
        CHECK(r.lpNorm<Eigen::Infinity>() < 1e-13);
    }
}

TEST_CASE("frozen single-element residual") {
    // unit element, ybar = 1, everything else zero: each free dof sees 1/2
    Mesh mesh = build_mesh(1, 1, {0, 1}, {0, 1});
    HJDofMap dofs = make_hj_dof_map(mesh);
    HJDualState state = make_hj_state(mesh);
    HJBase base{constant_field(mesh, 1.0), constant_field(mesh, 0.0), 1e6, 1e6, 0.0};
    HJProblemData data;
    data.Y0.assign(2, 0.0);
    Eigen::VectorXd r = assemble_residual_hj(state, base, data, mesh, dofs);
    REQUIRE(r.size() == 4);
    int fl0 = dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(0))];
    int fl1 = dofs.dof_to_free[static_cast<size_t>(HJDofMap::lambda_dof(1))];
    int fg0 = dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(0))];
    int fg2 = dofs.dof_to_free[static_cast<size_t>(HJDofMap::gamma_dof(2))];
    CHECK(r(fl0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r(fl1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r(fg0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r(fg2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("assembly matches an independent quadrature loop on random states") {
    std::mt19937 rng(19);
    Mesh mesh = build_mesh(3, 2, {0.1, 1.3}, {-0.2, 0.6});
    HJDofMap dofs = make_hj_dof_map(mesh);
    for (double nu : {0.0, 0.45}) {
        for (int trial = 0; trial < 8; ++trial) {
            RandomSetup rs = random_setup(mesh, rng, nu);
            Eigen::VectorXd got = assemble_residual_hj(rs.state, rs.base, rs.data, mesh, dofs);
            Eigen::VectorXd want = reference_residual(rs.state, rs.base, rs.data, mesh, dofs);
            REQUIRE(got.size() == want.size());
            CHECK((got - want).lpNorm<Eigen::Infinity>() < 1e-13 * (1.0 + want.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("jacobian agrees with finite differences, inviscid and viscous") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mesh mesh = build_mesh(3, 3, {0, 1}, {0, 1});
    HJDofMap dofs = make_hj_dof_map(mesh);
    for (double nu : {0.0, 1e-3, 0.3}) {
        RandomSetup rs = random_setup(mesh, rng, nu);
        auto scatter = [&](const Eigen::VectorXd& x) {
            HJDualState s = rs.state;
            for (int k = 0; k < dofs.n_free(); ++k) {
                int dof = dofs.free_to_dof[static_cast<size_t>(k)];
                (dof % 2 == 0 ? s.lambda(dof / 2) : s.gamma(dof / 2)) = x(k);
            }
            return s;
        };
        ResidualFn res = [&](const Eigen::VectorXd& x) {
            return assemble_residual_hj(scatter(x), rs.base, rs.data, mesh, dofs);
        };
        JacobianFn jac = [&](const Eigen::VectorXd& x) {
            return assemble_jacobian_hj(scatter(x), rs.base, mesh, dofs);
        };
        std::vector<Eigen::VectorXd> dirs;
        for (int k = 0; k < 6; ++k) {
            Eigen::VectorXd d(dofs.n_free());
            for (int i = 0; i < d.size(); ++i) d(i) = unif(rng);
            dirs.push_back(d.normalized());
        }
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd x(dofs.n_free());
            for (int i = 0; i < x.size(); ++i) x(i) = 0.4 * unif(rng);
            CHECK(jacobian_consistency(res, jac, x, dirs, 1e-6) < 1e-5);
        }
    }
}

TEST_CASE("nu = 0 leaves no trace of the viscous machinery") {
    std::mt19937 rng(31);
    Mesh mesh = build_mesh(3, 2, {0, 1}, {0, 0.5});
    HJDofMap dofs = make_hj_dof_map(mesh);
    RandomSetup rs = random_setup(mesh, rng, 0.0);
    HJProblemData bare = rs.data;
    bare.f_left = {};
    bare.f_right = {};
    Eigen::VectorXd with_f = assemble_residual_hj(rs.state, rs.base, rs.data, mesh, dofs);
    Eigen::VectorXd without_f = assemble_residual_hj(rs.state, rs.base, bare, mesh, dofs);
    CHECK((with_f - without_f).lpNorm<Eigen::Infinity>() == 0.0);  // bit-identical

    SparseMat ja = assemble_jacobian_hj(rs.state, rs.base, mesh, dofs);
    HJBase visc = rs.base;
    visc.nu = 1e-3;
    SparseMat jb = assemble_jacobian_hj(rs.state, visc, mesh, dofs);
    CHECK((Eigen::MatrixXd(ja) - Eigen::MatrixXd(jb)).norm() > 0.0);  // nu genuinely enters
}

TEST_CASE("residual is the gradient of the scalar functional") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mesh mesh = build_mesh(3, 2, {0, 1}, {0, 0.4});
    HJDofMap dofs = make_hj_dof_map(mesh);
    for (double nu : {0.0, 0.25}) {
        RandomSetup rs = random_setup(mesh, rng, nu);
        auto scatter = [&](const Eigen::VectorXd& x) {
            HJDualState s = rs.state;
            for (int k = 0; k < dofs.n_free(); ++k) {
                int dof = dofs.free_to_dof[static_cast<size_t>(k)];
                (dof % 2 == 0 ? s.lambda(dof / 2) : s.gamma(dof / 2)) = x(k);
            }
            return s;
        };
        Eigen::VectorXd x(dofs.n_free()), d(dofs.n_free());
        for (int i = 0; i < x.size(); ++i) x(i) = 0.3 * unif(rng);
        for (int i = 0; i < d.size(); ++i) d(i) = unif(rng);
        d.normalize();
        const double h = 1e-6;
        double plus = dual_functional_value_hj(scatter(x + h * d), rs.base, rs.data, mesh);
        double minus = dual_functional_value_hj(scatter(x - h * d), rs.base, rs.data, mesh);
        double along = assemble_residual_hj(scatter(x), rs.base, rs.data, mesh, dofs).dot(d);
        CHECK((plus - minus) / (2 * h) == doctest::Approx(along).epsilon(1e-6));
    }
}

TEST_CASE("jacobian symmetry: the system is a true Hessian") {
    std::mt19937 rng(41);
    Mesh mesh = build_mesh(3, 2, {0, 1}, {0, 0.5});
    HJDofMap dofs = make_hj_dof_map(mesh);
    for (double nu : {0.0, 0.2}) {
        RandomSetup rs = random_setup(mesh, rng, nu);
        Eigen::MatrixXd J(assemble_jacobian_hj(rs.state, rs.base, mesh, dofs));
        CHECK((J - J.transpose()).norm() < 1e-12 * (1.0 + J.norm()));
    }
}

TEST_CASE("coefficient tensor: closed form, PSD, degenerate directions") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double beta_Y = 5.0 + 4.0 * unif(rng);
        double beta_u = 6.0 + 4.0 * unif(rng);
        double lambda = unif(rng);
        double nu = trial % 2 == 0 ? 0.0 : 0.4 * std::abs(unif(rng));
        Eigen::Matrix4d A = ellipticity_tensor_hj(lambda, beta_Y, beta_u, nu);
        Eigen::Vector4d c(unif(rng), unif(rng), unif(rng), unif(rng));
        double expect = (c(0) + c(3)) * (c(0) + c(3)) / beta_Y + nu * nu * c(1) * c(1) / (beta_u + lambda);
        CHECK(c.dot(A * c) == doctest::Approx(expect).epsilon(1e-12));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(A);
        CHECK(eig.eigenvalues()(0) >= -1e-14);
        Eigen::Vector4d null_dir(1, 0, 0, -1);
        CHECK((A * null_dir).norm() < 1e-14);
    }
}

TEST_CASE("viscosity perturbs the lambda-x block by nu^2/(beta_u+lambda)") {
    Eigen::Matrix4d inviscid = ellipticity_tensor_hj(0.0, 1e6, 1e6, 0.0);
    Eigen::Matrix4d viscous = ellipticity_tensor_hj(0.0, 1e6, 1e6, 1e-3);
    Eigen::Matrix4d diff = viscous - inviscid;
    CHECK(diff(1, 1) == doctest::Approx(1e-12).epsilon(1e-12));
    diff(1, 1) = 0.0;
    CHECK(diff.norm() == 0.0);
}

TEST_CASE("normal contraction: inviscid always singular, viscous positive except along x") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::Matrix4d inviscid = ellipticity_tensor_hj(0.2, 7.0, 9.0, 0.0);
    Eigen::Matrix4d viscous = ellipticity_tensor_hj(0.2, 7.0, 9.0, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        double th = 3.14159 * unif(rng);
        double nt = std::cos(th), nx = std::sin(th);
        Eigen::Matrix2d Bi = ellipticity_normal_contraction(inviscid, nt, nx);
        CHECK(std::abs(Bi.determinant()) < 1e-14);  // a characteristic direction exists for every normal
        Eigen::Matrix2d Bv = ellipticity_normal_contraction(viscous, nt, nx);
        if (std::abs(nx) > 1e-8) CHECK(Bv.determinant() > 0.0);
    }
    Eigen::Matrix2d Bx = ellipticity_normal_contraction(viscous, 1.0, 0.0);
    Eigen::Vector2d a(0.0, 1.0);  // pure-gamma directions stay degenerate along x
    CHECK((Bx * a).norm() < 1e-15);
}

}  // TEST_SUITE
