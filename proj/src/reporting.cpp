#include "stburg/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stburg {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool is_hj(Form form) { return form != Form::conservation; }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

// consecutive samples sharing one time coordinate
struct TimelineView {
    double t;
    size_t begin, end;
};

std::vector<TimelineView> timelines_of(const std::vector<PlotSample>& samples) {
    std::vector<TimelineView> lines;
    size_t i = 0;
    while (i < samples.size()) {
        size_t j = i;
        while (j < samples.size() && samples[j].t == samples[i].t) ++j;
        lines.push_back({samples[i].t, i, j});
        i = j;
    }
    return lines;
}

std::vector<ProfileSlice> slices_of(const std::vector<PlotSample>& samples) {
    std::vector<ProfileSlice> slices;
    for (const TimelineView& line : timelines_of(samples)) {
        ProfileSlice s;
        s.t = line.t;
        for (size_t k = line.begin; k < line.end; ++k) {
            s.x.push_back(samples[k].x);
            s.u.push_back(samples[k].u);
        }
        slices.push_back(std::move(s));
    }
    return slices;
}

}  // namespace

std::vector<PlotSample> plot_samples(const Trajectory& traj) {
    std::vector<PlotSample> out;
    for (size_t s = 0; s < traj.stages.size(); ++s) {
        StageProfiles prof = profile_slices(traj.stages[s]);
        for (size_t k = 0; k < prof.u.size(); ++k) {
            for (size_t c = 0; c < prof.u[k].x.size(); ++c) {
                PlotSample row;
                row.stage = static_cast<int>(s) + 1;
                row.t = prof.u[k].t;
                row.x = prof.u[k].x[c];
                row.u = prof.u[k].u[c];
                if (!prof.Y.empty()) row.Y = prof.Y[k].u[c];
                out.push_back(row);
            }
        }
    }
    return out;
}

void write_csv(const std::string& path, const RunConfig& cfg, const std::vector<PlotSample>& samples) {
    std::ofstream out = open_out(path);
    const char* problem = benchmark_name(cfg.problem.kind);
    const char* form = form_name(cfg.problem.form);
    bool hj = is_hj(cfg.problem.form);
    out << (hj ? "problem,form,stage,t,x,Y,u\n" : "problem,form,stage,t,x,u\n");
    for (const PlotSample& s : samples) {
        out << problem << ',' << form << ',' << s.stage << ',' << fmt17(s.t) << ',' << fmt17(s.x) << ',';
        if (hj) out << fmt17(s.Y) << ',';
        out << fmt17(s.u) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<PlotSample> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    bool hj = line.find(",Y,") != std::string::npos;
    std::vector<PlotSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        size_t expect = hj ? 7 : 6;
        if (cells.size() != expect) throw std::runtime_error("malformed CSV row in " + path + ": " + line);
        PlotSample s;
        s.stage = std::atoi(cells[2].c_str());
        s.t = std::strtod(cells[3].c_str(), nullptr);
        s.x = std::strtod(cells[4].c_str(), nullptr);
        if (hj) {
            s.Y = std::strtod(cells[5].c_str(), nullptr);
            s.u = std::strtod(cells[6].c_str(), nullptr);
        } else {
            s.u = std::strtod(cells[5].c_str(), nullptr);
        }
        out.push_back(s);
    }
    return out;
}

ErrorReport compare_samples(const RunConfig& cfg, const std::vector<PlotSample>& samples) {
    ErrorReport report;
    BenchmarkKind kind = cfg.problem.kind;
    bool hj = is_hj(cfg.problem.form);
    double hx = (cfg.stage.x_hi - cfg.stage.x_lo) / cfg.stage.nx;
    double band = cfg.kink_band_elems * hx;

    std::vector<TimelineView> lines = timelines_of(samples);
    std::optional<double> first_integral;
    double drift = 0.0;
    for (const TimelineView& line : lines) {
        std::vector<double> kinks = kink_locations(kind, line.t);
        auto excluded = [&](double x) {
            for (double k : kinks)
                if (std::abs(x - k) <= band) return true;
            return false;
        };
        TimelineError eu{line.t, 0.0, 0.0}, ey{line.t, 0.0, 0.0};
        double integral = 0.0;
        for (size_t k = line.begin; k < line.end; ++k) {
            const PlotSample& s = samples[k];
            integral += s.u * hx;
            if (excluded(s.x)) continue;
            double du = std::abs(s.u - exact_u(kind, s.x, s.t));
            eu.l1 += du * hx;
            eu.linf = std::max(eu.linf, du);
            if (hj) {
                double dy = std::abs(s.Y - exact_Y(kind, s.x, s.t));
                ey.l1 += dy * hx;
                ey.linf = std::max(ey.linf, dy);
            }
        }
        report.u_errors.push_back(eu);
        if (hj) report.Y_errors.push_back(ey);
        if (!first_integral) first_integral = integral;
        drift = std::max(drift, std::abs(integral - *first_integral));
    }
    if (first_integral) report.conservation_drift = drift;

    ShockDiagnostics diag =
        estimate_shock_trajectory(slices_of(samples), cfg.stage.x_lo + 2 * hx, cfg.stage.x_hi - 2 * hx);
    double worst = -1.0;
    for (const ShockPoint& p : diag.points) {
        std::vector<double> kinks = kink_locations(kind, p.t);
        if (kinks.empty()) continue;
        double best = std::abs(p.position - kinks[0]);
        for (double k : kinks) best = std::min(best, std::abs(p.position - k));
        worst = std::max(worst, best);
    }
    if (worst >= 0.0) report.shock_position_error = worst;
    return report;
}

void write_metadata(const std::string& path, const RunConfig& cfg, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    const StageConfig& st = cfg.stage;
    out << "problem=" << benchmark_name(cfg.problem.kind) << '\n';
    out << "form=" << form_name(cfg.problem.form) << '\n';
    out << "base_state_mode="
        << (st.base_mode == BaseStateMode::self_consistent ? "self_consistent" : "viscous_exact") << '\n';
    out << "flux_sign=" << cfg.problem.flux_sign << '\n';
    out << "nu=" << fmt17(cfg.problem.nu) << '\n';
    out << "nu_base=" << fmt17(st.nu_base) << '\n';
    out << "nx=" << st.nx << '\n';
    out << "nt=" << st.nt << '\n';
    out << "stage_duration=" << fmt17(st.stage_duration) << '\n';
    out << "x_lo=" << fmt17(st.x_lo) << '\n';
    out << "x_hi=" << fmt17(st.x_hi) << '\n';
    out << "beta_u=" << fmt17(st.beta_u) << '\n';
    out << "beta_Y=" << fmt17(st.beta_Y) << '\n';
    out << "n_cut=" << st.n_cut << '\n';
    out << "tol=" << fmt17(st.tol) << '\n';
    out << "newton_max_iter=" << st.newton_max_iter << '\n';
    out << "smoothing_eta=" << fmt17(st.smoothing_eta) << '\n';
    out << "max_stages=" << st.max_stages << '\n';
    out << "t_final=" << fmt17(cfg.t_final) << '\n';
    out << "kink_band_elems=" << cfg.kink_band_elems << '\n';
    out << "cutoff_offset=" << fmt17(cutoff_offset(st, cfg.problem.form)) << '\n';
    out << "stage1_base_rule="
        << (cfg.problem.form == Form::conservation
                ? "smoothed Gauss samples of the initial condition"
                : "initial Y at Gauss points; initial u as its analytic slope")
        << '\n';
    out << "handoff_rule="
        << (cfg.problem.form == Form::conservation
                ? "cutoff Gauss samples restart; base from Helmholtz-smoothed samples"
                : "L2-projected nodal Y restarts; base Y and slope from the projection")
        << '\n';
    out << "stages=" << traj.stages.size() << '\n';
    out << "completed=" << (traj.completed ? "true" : "false") << '\n';
    if (!traj.failure.empty()) out << "failure=" << traj.failure << '\n';
    for (size_t s = 0; s < traj.stages.size(); ++s) {
        out << "stage_" << s + 1 << "_newton_iters=" << traj.stages[s].newton.iterations << '\n';
        out << "stage_" << s + 1 << "_t_f=" << fmt17(traj.stages[s].retained_extent) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Series {
    std::vector<double> x, y;
};

void polyline(std::ostream& out, const Series& s, double x0, double x1, double y0, double y1, double px, double py,
              double pw, double ph, const char* style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (size_t k = 0; k < s.x.size(); ++k) {
        double fx = px + (s.x[k] - x0) / (x1 - x0) * pw;
        double fy = py + ph - (s.y[k] - y0) / (y1 - y0) * ph;
        out << fmt6(fx) << ',' << fmt6(fy) << ' ';
    }
    out << "\"/>\n";
}

void chart(std::ostream& out, double top, const Series& computed, const Series& oracle, const std::string& ylabel,
           const std::string& title) {
    const double px = 70, pw = 680, ph = 300, py = top;
    double x0 = computed.x.front(), x1 = computed.x.back();
    double y0 = computed.y.front(), y1 = y0;
    for (double v : computed.y) {
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
    }
    for (double v : oracle.y) {
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
    }
    double pad = std::max(1e-6, 0.08 * (y1 - y0));
    y0 -= pad;
    y1 += pad;

    out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        double xv = x0 + k * (x1 - x0) / 4, yv = y0 + k * (y1 - y0) / 4;
        double fx = px + k * pw / 4.0, fy = py + ph - k * ph / 4.0;
        out << "<line x1=\"" << fmt6(fx) << "\" y1=\"" << py + ph << "\" x2=\"" << fmt6(fx) << "\" y2=\""
            << py + ph + 5 << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << fmt6(fx) << "\" y=\"" << py + ph + 18
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#222\">" << fmt6(xv) << "</text>\n";
        out << "<line x1=\"" << px - 5 << "\" y1=\"" << fmt6(fy) << "\" x2=\"" << px << "\" y2=\"" << fmt6(fy)
            << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << px - 8 << "\" y=\"" << fmt6(fy + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#222\">" << fmt6(yv) << "</text>\n";
    }
    polyline(out, oracle, x0, x1, y0, y1, px, py, pw, ph,
             "stroke=\"#c0392b\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"");
    polyline(out, computed, x0, x1, y0, y1, px, py, pw, ph, "stroke=\"#2c6aa0\" stroke-width=\"1.6\"");
    out << "<text x=\"" << px << "\" y=\"" << py - 10 << "\" font-size=\"13\" fill=\"#222\">" << title
        << "</text>\n";
    out << "<text x=\"20\" y=\"" << py + ph / 2 << "\" font-size=\"12\" fill=\"#222\">" << ylabel << "</text>\n";
    out << "<line x1=\"" << px + pw - 180 << "\" y1=\"" << py + 14 << "\" x2=\"" << px + pw - 140 << "\" y2=\""
        << py + 14 << "\" stroke=\"#2c6aa0\" stroke-width=\"1.6\"/>\n";
    out << "<text x=\"" << px + pw - 134 << "\" y=\"" << py + 18 << "\" font-size=\"11\" fill=\"#222\">computed</text>\n";
    out << "<line x1=\"" << px + pw - 180 << "\" y1=\"" << py + 30 << "\" x2=\"" << px + pw - 140 << "\" y2=\""
        << py + 30 << "\" stroke=\"#c0392b\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << px + pw - 134 << "\" y=\"" << py + 34 << "\" font-size=\"11\" fill=\"#222\">exact</text>\n";
}

}  // namespace

void write_svg(const std::string& path, const RunConfig& cfg, const std::vector<PlotSample>& samples,
               double plot_time) {
    if (samples.empty()) throw std::invalid_argument("write_svg: no samples");
    std::vector<TimelineView> lines = timelines_of(samples);
    const TimelineView* pick = &lines.front();
    for (const TimelineView& line : lines)
        if (std::abs(line.t - plot_time) < std::abs(pick->t - plot_time)) pick = &line;

    bool hj = is_hj(cfg.problem.form);
    BenchmarkKind kind = cfg.problem.kind;
    Series cu, cy;
    for (size_t k = pick->begin; k < pick->end; ++k) {
        cu.x.push_back(samples[k].x);
        cu.y.push_back(samples[k].u);
        if (hj) {
            cy.x.push_back(samples[k].x);
            cy.y.push_back(samples[k].Y);
        }
    }
    Series ou, oy;
    for (int k = 0; k <= 400; ++k) {
        double x = cfg.stage.x_lo + k * (cfg.stage.x_hi - cfg.stage.x_lo) / 400.0;
        ou.x.push_back(x);
        ou.y.push_back(exact_u(kind, x, pick->t));
        if (hj) {
            oy.x.push_back(x);
            oy.y.push_back(exact_Y(kind, x, pick->t));
        }
    }

    std::ofstream out = open_out(path);
    int height = hj ? 800 : 400;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"" << height
        << "\" viewBox=\"0 0 800 " << height << "\">\n<rect width=\"800\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    std::string title = std::string(benchmark_name(kind)) + " (" + form_name(cfg.problem.form) +
                        "), t = " + fmt6(pick->t);
    chart(out, 40, cu, ou, "u", title);
    if (hj) chart(out, 440, cy, oy, "Y", title);
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_diagnostics(const std::string& path, const RunConfig& cfg, const std::vector<PlotSample>& samples) {
    double hx = (cfg.stage.x_hi - cfg.stage.x_lo) / cfg.stage.nx;
    ShockDiagnostics diag =
        estimate_shock_trajectory(slices_of(samples), cfg.stage.x_lo + 2 * hx, cfg.stage.x_hi - 2 * hx);
    std::ofstream out = open_out(path);
    out << "t,position,u_minus,u_plus,speed\n";
    for (size_t k = 0; k < diag.points.size(); ++k) {
        const ShockPoint& p = diag.points[k];
        out << fmt17(p.t) << ',' << fmt17(p.position) << ',' << fmt17(p.u_minus) << ',' << fmt17(p.u_plus) << ','
            << fmt17(diag.speeds[k]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_error_report(const std::string& path, const ErrorReport& report) {
    std::ofstream out = open_out(path);
    for (const TimelineError& e : report.u_errors)
        out << "u t=" << fmt17(e.t) << " l1=" << fmt17(e.l1) << " linf=" << fmt17(e.linf) << '\n';
    for (const TimelineError& e : report.Y_errors)
        out << "Y t=" << fmt17(e.t) << " l1=" << fmt17(e.l1) << " linf=" << fmt17(e.linf) << '\n';
    out << "shock_position_error="
        << (report.shock_position_error ? fmt17(*report.shock_position_error) : std::string("none")) << '\n';
    out << "conservation_drift="
        << (report.conservation_drift ? fmt17(*report.conservation_drift) : std::string("none")) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

int run(const RunConfig& cfg) {
    if (!(cfg.t_final > 0)) throw std::invalid_argument("t_final must be positive");
    if (cfg.problem.form == Form::hj_viscous && !(cfg.problem.nu > 0))
        throw std::invalid_argument("hj_viscous requires nu > 0");
    if (cfg.stage.base_mode == BaseStateMode::viscous_exact && !(cfg.stage.nu_base > 0))
        throw std::invalid_argument("viscous_exact base states require nu_base > 0");
    if (cfg.out_dir.empty()) throw std::invalid_argument("output directory not set");
    std::filesystem::create_directories(cfg.out_dir);

    Trajectory traj = march(cfg.problem, cfg.stage, cfg.t_final);
    std::vector<PlotSample> samples = plot_samples(traj);
    std::string base = cfg.out_dir + "/" + benchmark_name(cfg.problem.kind) + "_" + form_name(cfg.problem.form);

    std::vector<std::string> written;
    if (cfg.emit_csv) {
        write_csv(base + ".csv", cfg, samples);
        written.push_back(base + ".csv");
    }
    write_metadata(base + "_metadata.txt", cfg, traj);
    written.push_back(base + "_metadata.txt");

    if (!traj.completed) {
        std::ofstream manifest = open_out(cfg.out_dir + "/MANIFEST");
        manifest << "status=failed\n" << "failure=" << traj.failure << '\n';
        manifest << "stages_completed=" << traj.stages.size() << '\n';
        for (const std::string& w : written) manifest << "artifact=" << w << '\n';
        return 1;
    }

    if (cfg.compare) {
        ErrorReport report = compare_samples(cfg, samples);
        write_error_report(base + "_report.txt", report);
    }
    if (cfg.emit_diagnostics) write_diagnostics(base + "_shock.csv", cfg, samples);
    if (cfg.emit_svg) {
        std::vector<double> times = cfg.plot_times;
        if (times.empty() && !samples.empty()) times.push_back(samples.back().t);
        for (size_t k = 0; k < times.size(); ++k)
            write_svg(base + "_profile" + std::to_string(k) + ".svg", cfg, samples, times[k]);
    }
    return 0;
}

}  // namespace stburg
