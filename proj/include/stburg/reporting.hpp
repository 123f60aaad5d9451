#pragma once

// Run orchestration and artifacts: CSV of Gauss-line-averaged profiles,
// key=value metadata, static SVG line charts with oracle overlays, error
// norms with kink-exclusion bands, and shock diagnostics.

#include <optional>
#include <string>
#include <vector>

#include "stburg/exact_solutions.hpp"
#include "stburg/stage.hpp"

namespace stburg {

struct RunConfig {
    ProblemSpec problem;
    StageConfig stage;
    double t_final = 0.4;
    std::string out_dir = ".";
    bool emit_csv = true;
    bool emit_svg = false;
    bool emit_diagnostics = false;
    bool compare = false;
    std::vector<double> plot_times;  // profile charts at the nearest timelines
    int kink_band_elems = 3;         // exclusion half-width for error norms
};

struct PlotSample {
    int stage = 0;  // 1-based
    double t = 0.0, x = 0.0;
    double u = 0.0;
    double Y = 0.0;  // hj forms only
};

// Figure rule applied to every retained Gauss timeline of every stage;
// ordered by (t, x).
std::vector<PlotSample> plot_samples(const Trajectory& traj);

struct TimelineError {
    double t = 0.0;
    double l1 = 0.0, linf = 0.0;
};

struct ErrorReport {
    std::vector<TimelineError> u_errors;
    std::vector<TimelineError> Y_errors;  // hj forms only
    std::optional<double> shock_position_error;
    std::optional<double> conservation_drift;
};

// Norms vs the exact benchmark profiles at identical (x, t), skipping a band
// of kink_band_elems element widths around each exact kink.
ErrorReport compare_samples(const RunConfig& cfg, const std::vector<PlotSample>& samples);

void write_csv(const std::string& path, const RunConfig& cfg, const std::vector<PlotSample>& samples);
std::vector<PlotSample> read_csv(const std::string& path);

void write_metadata(const std::string& path, const RunConfig& cfg, const Trajectory& traj);
void write_svg(const std::string& path, const RunConfig& cfg, const std::vector<PlotSample>& samples,
               double plot_time);
void write_diagnostics(const std::string& path, const RunConfig& cfg, const std::vector<PlotSample>& samples);
void write_error_report(const std::string& path, const ErrorReport& report);

// March, emit artifacts into cfg.out_dir. Returns 0 on success, 1 on solver
// failure (partial outputs plus a MANIFEST naming the failed stage).
// Invalid configurations throw std::invalid_argument (CLI maps these to 2).
int run(const RunConfig& cfg);

}  // namespace stburg
