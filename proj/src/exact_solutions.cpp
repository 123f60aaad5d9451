#include "stburg/exact_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stburg {

namespace {
constexpr double kMergeTimeNwave = 0.125;   // fans absorb the linear core
constexpr double kMergeTimeDshock = 0.5;    // the two fronts meet
constexpr double kMergeXDshock = 0.625;

// half N-wave geometry: foot x0, initial width l0, initial height h0
constexpr double kX0 = 0.25, kL0 = 0.25, kH0 = 2.0;
double hn_width(double t) { return std::sqrt(kH0 * kL0 * t + kL0 * kL0); }
}  // namespace

const char* benchmark_name(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::fan: return "fan";
        case BenchmarkKind::shock: return "shock";
        case BenchmarkKind::double_shock: return "double_shock";
        case BenchmarkKind::half_nwave: return "half_nwave";
        case BenchmarkKind::nwave: return "nwave";
    }
    throw std::invalid_argument("benchmark_name: bad kind");
}

BenchmarkKind benchmark_from_name(const std::string& name) {
    if (name == "fan") return BenchmarkKind::fan;
    if (name == "shock") return BenchmarkKind::shock;
    if (name == "double_shock") return BenchmarkKind::double_shock;
    if (name == "half_nwave") return BenchmarkKind::half_nwave;
    if (name == "nwave") return BenchmarkKind::nwave;
    throw std::invalid_argument("unknown benchmark: " + name);
}

double initial_u(BenchmarkKind kind, double x) {
    switch (kind) {
        case BenchmarkKind::fan: return x < 0.5 ? 0.0 : 1.0;
        case BenchmarkKind::shock: return x < 0.5 ? 1.0 : 0.0;
        case BenchmarkKind::double_shock:
            if (x < 0.25) return 1.0;
            if (x < 0.5) return 0.5;
            return 0.0;
        case BenchmarkKind::half_nwave:
            if (x < kX0 || x >= kX0 + kL0) return 0.0;
            return kH0 * (x - kX0) / kL0;
        case BenchmarkKind::nwave:
            if (x < 0.25 || x > 0.75) return 0.0;
            return -8.0 * (x - 0.5);
    }
    throw std::invalid_argument("initial_u: bad kind");
}

double initial_Y(BenchmarkKind kind, double x) {
    return initial_Y_pieces(kind).eval(x);
}

double boundary_u(BenchmarkKind kind, double t) {
    (void)t;
    switch (kind) {
        case BenchmarkKind::fan: return 0.0;
        case BenchmarkKind::shock: return 1.0;
        case BenchmarkKind::double_shock: return 1.0;
        case BenchmarkKind::half_nwave: return 0.0;
        case BenchmarkKind::nwave: return 0.0;
    }
    throw std::invalid_argument("boundary_u: bad kind");
}

double boundary_Y(BenchmarkKind kind, double t) {
    switch (kind) {
        case BenchmarkKind::fan: return 0.0;
        case BenchmarkKind::shock: return -0.5 * t;
        case BenchmarkKind::double_shock: return -0.5 * t;
        case BenchmarkKind::half_nwave: return 0.0;
        case BenchmarkKind::nwave: return 0.0;
    }
    throw std::invalid_argument("boundary_Y: bad kind");
}

double exact_u(BenchmarkKind kind, double x, double t) {
    if (!(t > 0)) throw std::invalid_argument("exact_u: requires t > 0");
    switch (kind) {
        case BenchmarkKind::fan:
            if (x < 0.5) return 0.0;
            if (x < 0.5 + t) return (x - 0.5) / t;
            return 1.0;
        case BenchmarkKind::shock:
            return x < 0.5 + 0.5 * t ? 1.0 : 0.0;
        case BenchmarkKind::double_shock:
            if (t < kMergeTimeDshock) {
                if (x < 0.25 + 0.75 * t) return 1.0;
                if (x < 0.5 + 0.25 * t) return 0.5;
                return 0.0;
            }
            return x < kMergeXDshock + 0.5 * (t - kMergeTimeDshock) ? 1.0 : 0.0;
        case BenchmarkKind::half_nwave: {
            double l = hn_width(t);
            if (x < kX0 || x >= kX0 + l) return 0.0;
            return (kH0 * kL0 / (l * l)) * (x - kX0);
        }
        case BenchmarkKind::nwave: {
            if (t < kMergeTimeNwave && x >= 0.25 + 2.0 * t && x <= 0.75 - 2.0 * t)
                return 8.0 * (x - 0.5) / (8.0 * t - 1.0);
            double fan_hi = t < kMergeTimeNwave ? 0.25 + 2.0 * t : 0.5;
            double fan_lo = t < kMergeTimeNwave ? 0.75 - 2.0 * t : 0.5;
            if (x >= 0.25 && x < fan_hi) return (x - 0.25) / t;
            if (x > fan_lo && x <= 0.75) return (x - 0.75) / t;
            return 0.0;
        }
    }
    throw std::invalid_argument("exact_u: bad kind");
}

double exact_Y(BenchmarkKind kind, double x, double t) {
    if (!(t > 0)) throw std::invalid_argument("exact_Y: requires t > 0");
    switch (kind) {
        case BenchmarkKind::fan:
            if (x < 0.5) return 0.0;
            if (x < 0.5 + t) return (x - 0.5) * (x - 0.5) / (2.0 * t);
            return x - 0.5 - 0.5 * t;
        case BenchmarkKind::shock:
            return x < 0.5 + 0.5 * t ? x - 0.5 * t : 0.5;
        case BenchmarkKind::double_shock:
            if (t < kMergeTimeDshock) {
                if (x < 0.25 + 0.75 * t) return x - 0.5 * t;
                if (x < 0.5 + 0.25 * t) return 0.5 * x + 0.125 - 0.125 * t;
                return 0.375;
            }
            return x < kMergeXDshock + 0.5 * (t - kMergeTimeDshock) ? x - 0.5 * t : 0.375;
        case BenchmarkKind::half_nwave: {
            double l = hn_width(t);
            if (x < kX0) return 0.0;
            if (x < kX0 + l) return (kH0 * kL0 / (l * l)) * (0.5 * (x * x + kX0 * kX0) - kX0 * x);
            return 0.5 * kH0 * kL0;
        }
        case BenchmarkKind::nwave: {
            if (t < kMergeTimeNwave && x >= 0.25 + 2.0 * t && x < 0.75 - 2.0 * t)
                return 4.0 * (x * x - x) / (8.0 * t - 1.0) + (8.0 * t + 3.0) / (4.0 * (8.0 * t - 1.0));
            double fan_hi = t < kMergeTimeNwave ? 0.25 + 2.0 * t : 0.5;
            double fan_lo = t < kMergeTimeNwave ? 0.75 - 2.0 * t : 0.5;
            if (x >= 0.25 && x < fan_hi) return (2.0 * x * x - x) / (4.0 * t) + 1.0 / (32.0 * t);
            if (x >= fan_lo && x < 0.75) return (2.0 * x * x - 3.0 * x) / (4.0 * t) + 9.0 / (32.0 * t);
            return 0.0;
        }
    }
    throw std::invalid_argument("exact_Y: bad kind");
}

std::vector<double> kink_locations(BenchmarkKind kind, double t) {
    switch (kind) {
        case BenchmarkKind::fan: return {0.5, 0.5 + t};
        case BenchmarkKind::shock: return {0.5 + 0.5 * t};
        case BenchmarkKind::double_shock:
            if (t < kMergeTimeDshock) return {0.25 + 0.75 * t, 0.5 + 0.25 * t};
            return {kMergeXDshock + 0.5 * (t - kMergeTimeDshock)};
        case BenchmarkKind::half_nwave: return {kX0, kX0 + hn_width(t)};
        case BenchmarkKind::nwave:
            if (t < kMergeTimeNwave) return {0.25, 0.25 + 2.0 * t, 0.75 - 2.0 * t, 0.75};
            return {0.25, 0.5, 0.75};
    }
    throw std::invalid_argument("kink_locations: bad kind");
}

double rankine_hugoniot_speed(double u_minus, double u_plus) {
    if (u_minus == u_plus) throw std::invalid_argument("rankine_hugoniot_speed: states coincide, no jump");
    return 0.5 * (u_minus + u_plus);
}

// ---- viscous reference ----

double PiecewiseQuadratic::eval(double x) const {
    size_t k = 0;
    while (k < breaks.size() && x >= breaks[k]) ++k;
    const auto& p = coef[k];
    return (p[0] * x + p[1]) * x + p[2];
}

PiecewiseQuadratic initial_Y_pieces(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::fan: return {{0.5}, {{{0, 0, 0}}, {{0, 1, -0.5}}}};
        case BenchmarkKind::shock: return {{0.5}, {{{0, 1, 0}}, {{0, 0, 0.5}}}};
        case BenchmarkKind::double_shock:
            return {{0.25, 0.5}, {{{0, 1, 0}}, {{0, 0.5, 0.125}}, {{0, 0, 0.375}}}};
        case BenchmarkKind::half_nwave:
            return {{0.25, 0.5}, {{{0, 0, 0}}, {{4, -2, 0.25}}, {{0, 0, 0.25}}}};
        case BenchmarkKind::nwave:
            return {{0.25, 0.75}, {{{0, 0, 0}}, {{-4, 4, -0.75}}, {{0, 0, 0}}}};
    }
    throw std::invalid_argument("initial_Y_pieces: bad kind");
}

namespace {

// G(y) = Y0(y) + (x-y)^2 / (2t), piecewise quadratic in y.
struct GPiece {
    double lo, hi;   // piece domain (may be +-inf)
    double A, B, C;  // A y^2 + B y + C
    double eval(double y) const { return (A * y + B) * y + C; }
};

std::vector<GPiece> g_pieces(const PiecewiseQuadratic& Y0, double x, double t) {
    std::vector<GPiece> out;
    const double inf = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < Y0.coef.size(); ++k) {
        GPiece p;
        p.lo = k == 0 ? -inf : Y0.breaks[k - 1];
        p.hi = k == Y0.coef.size() - 1 ? inf : Y0.breaks[k];
        p.A = Y0.coef[k][0] + 0.5 / t;
        p.B = Y0.coef[k][1] - x / t;
        p.C = Y0.coef[k][2] + 0.5 * x * x / t;
        out.push_back(p);
    }
    return out;
}

double piece_min(const GPiece& p) {
    // finite minimum over the (possibly unbounded) interval
    double best = std::numeric_limits<double>::infinity();
    if (std::isfinite(p.lo)) best = std::min(best, p.eval(p.lo));
    if (std::isfinite(p.hi)) best = std::min(best, p.eval(p.hi));
    if (p.A > 0) {
        double v = -p.B / (2.0 * p.A);
        if (v > p.lo && v < p.hi) best = std::min(best, p.eval(v));
    }
    // A <= 0 on an unbounded piece cannot happen: extensions carry A = 1/(2t) > 0
    return best;
}

// interval of {G <= thr} within the piece, empty -> lo > hi
std::pair<double, double> piece_sublevel(const GPiece& p, double thr) {
    const double bad_lo = 1.0, bad_hi = 0.0;
    if (p.A > 0) {
        double disc = p.B * p.B - 4.0 * p.A * (p.C - thr);
        if (disc <= 0) return {bad_lo, bad_hi};
        double r = std::sqrt(disc) / (2.0 * p.A);
        double v = -p.B / (2.0 * p.A);
        double lo = std::max(p.lo, v - r), hi = std::min(p.hi, v + r);
        if (lo > hi) return {bad_lo, bad_hi};
        return {lo, hi};
    }
    // concave or linear piece: bounded domain; conservative hull of endpoints below thr
    double lo = p.hi, hi = p.lo;
    if (p.eval(p.lo) <= thr) { lo = std::min(lo, p.lo); hi = std::max(hi, p.lo); }
    if (p.eval(p.hi) <= thr) { lo = std::min(lo, p.hi); hi = std::max(hi, p.hi); }
    if (p.A < 0) {
        // interior above the chord can dip under thr between the roots' complement;
        // simply include the whole piece when any interior point passes
        double v = -p.B / (2.0 * p.A);
        if (v > p.lo && v < p.hi && p.eval(v) <= thr) { lo = p.lo; hi = p.hi; }
    }
    if (lo > hi) return {bad_lo, bad_hi};
    return {lo, hi};
}

}  // namespace

ViscousPoint viscous_solution(const PiecewiseQuadratic& Y0, double nu, double x, double t, double rel_tol) {
    if (!(nu > 0) || !(t > 0)) throw std::invalid_argument("viscous_solution: requires nu > 0 and t > 0");

    std::vector<GPiece> pieces = g_pieces(Y0, x, t);
    double g_star = std::numeric_limits<double>::infinity();
    for (const GPiece& p : pieces) g_star = std::min(g_star, piece_min(p));

    // support of the shifted integrand above e^-46
    const double thr = g_star + 46.0 * 2.0 * nu;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const GPiece& p : pieces) {
        auto [a, b] = piece_sublevel(p, thr);
        if (a <= b) { lo = std::min(lo, a); hi = std::max(hi, b); }
    }

    auto integrand = [&](double y, double& f0, double& f1) {
        size_t k = 0;
        while (k < pieces.size() && !(y < pieces[k].hi)) ++k;
        if (k == pieces.size()) k = pieces.size() - 1;
        double e = std::exp(-(pieces[k].eval(y) - g_star) / (2.0 * nu));
        f0 = e;
        f1 = (x - y) / t * e;
    };

    // composite Simpson with doubling until both integrals have settled
    ViscousPoint out;
    double prev0 = 0, prev1 = 0;
    int n = 64;
    const int n_max = 1 << 17;
    double I0 = 0, I1 = 0;
    for (;; n *= 2) {
        double h = (hi - lo) / n;
        double s0 = 0, s1 = 0, f0, f1;
        integrand(lo, f0, f1);
        s0 += f0;
        s1 += f1;
        integrand(hi, f0, f1);
        s0 += f0;
        s1 += f1;
        for (int i = 1; i < n; ++i) {
            integrand(lo + i * h, f0, f1);
            double w = (i % 2 == 1) ? 4.0 : 2.0;
            s0 += w * f0;
            s1 += w * f1;
        }
        I0 = s0 * h / 3.0;
        I1 = s1 * h / 3.0;
        if (n > 64) {
            double r0 = std::abs(I0 - prev0) / std::max(I0, 1e-300);
            double u_new = I1 / I0, u_old = prev1 / std::max(prev0, 1e-300);
            double r1 = std::abs(u_new - u_old) / std::max(1.0, std::abs(u_new));
            out.achieved_tol = std::max(r0, r1);
            if (out.achieved_tol <= rel_tol) {
                out.converged = true;
                break;
            }
            if (n >= n_max) break;
        }
        prev0 = I0;
        prev1 = I1;
    }

    out.u = I1 / I0;
    out.Y = g_star - 2.0 * nu * std::log(I0) + 2.0 * nu * std::log(2.0 * std::sqrt(M_PI * nu * t));
    return out;
}

double viscous_u(BenchmarkKind kind, double nu, double x, double t) {
    return viscous_solution(initial_Y_pieces(kind), nu, x, t).u;
}

double viscous_Y(BenchmarkKind kind, double nu, double x, double t) {
    return viscous_solution(initial_Y_pieces(kind), nu, x, t).Y;
}

// ---- diagnostics ----

namespace {
double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

double descending_level_crossing(const std::vector<double>& x, const std::vector<double>& u, double level, double lo,
                                 double hi) {
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i] < lo || x[i + 1] > hi) continue;
        if (u[i] >= level && u[i + 1] < level) {
            double f = (u[i] - level) / (u[i] - u[i + 1]);
            return x[i] + f * (x[i + 1] - x[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ShockDiagnostics estimate_shock_trajectory(const std::vector<ProfileSlice>& slices, double window_lo,
                                           double window_hi) {
    ShockDiagnostics diag;
    for (const ProfileSlice& s : slices) {
        std::vector<double> left, right;
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] < window_lo) left.push_back(s.u[i]);
            else if (s.x[i] > window_hi) right.push_back(s.u[i]);
        }
        if (left.empty() || right.empty()) continue;
        double um = median(left), up = median(right);
        if (!(um > up)) continue;  // no admissible jump in this profile
        double pos = descending_level_crossing(s.x, s.u, 0.5 * (um + up), window_lo, window_hi);
        if (std::isnan(pos)) continue;
        diag.points.push_back({s.t, pos, um, up});
    }
    diag.speeds.assign(diag.points.size(), std::numeric_limits<double>::quiet_NaN());
    for (size_t k = 0; k < diag.points.size(); ++k) {
        size_t a = k == 0 ? 0 : k - 1;
        size_t b = k + 1 == diag.points.size() ? k : k + 1;
        if (a == b) continue;
        double dt = diag.points[b].t - diag.points[a].t;
        if (dt > 0) diag.speeds[k] = (diag.points[b].position - diag.points[a].position) / dt;
    }
    return diag;
}

double conserved_integral(const std::vector<double>& gauss_values, double lo, double hi) {
    if (gauss_values.empty() || gauss_values.size() % 2 != 0)
        throw std::invalid_argument("conserved_integral: need Gauss pairs");
    double h = (hi - lo) / (static_cast<double>(gauss_values.size()) / 2.0);
    double s = 0;
    for (double v : gauss_values) s += v;
    return 0.5 * h * s;
}

}  // namespace stburg
