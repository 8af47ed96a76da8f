#pragma once

#include "beliefsim/experiment.hpp"
#include "beliefsim/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace beliefsim {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

// CSV -----------------------------------------------------------------------

/// Header `step,P_O,P_A,mean_dissonance`, one row per sample.
void emit_timeseries_csv(const MetricsSeries& series, const std::filesystem::path& path);
MetricsSeries read_timeseries_csv(const std::filesystem::path& path);

/// Header `alpha,beta,P_O,P_A,mean_dissonance`, one row per cell.
void emit_sweep_csv(const SweepGrid& grid, const std::filesystem::path& path);

/// Header `histogram,bin_lower,bin_upper,count`.
void emit_histograms_csv(const HistogramSet& histograms, const std::filesystem::path& path);

// SVG -----------------------------------------------------------------------

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<LineSeries> series;
};

struct BarPlot {
    std::string title;
    std::string x_label;
    std::vector<std::string> labels;  // one per histogram
    std::vector<Histogram> histograms;
};

struct HeatmapPlot {
    std::string title;
    std::vector<double> alphas;  // rows
    std::vector<double> betas;   // columns
    Eigen::MatrixXd values;
    double v_min = 0.0;
    double v_max = 2.0;
};

std::string render_line_plot(const LinePlot& plot);
std::string render_histogram(const BarPlot& plot);
std::string render_heatmap(const HeatmapPlot& plot);

/// Writes the time-series and histogram figures of one run. Returns the files written.
std::vector<std::filesystem::path> emit_run_plots(const RunResult& run, const std::filesystem::path& out_dir);

/// Writes one heatmap per metric. Returns the files written.
std::vector<std::filesystem::path> emit_sweep_plots(const SweepGrid& grid, const std::filesystem::path& out_dir);

void write_text(const std::filesystem::path& path, std::string_view text);

// Manifest --------------------------------------------------------------------

struct RunManifest {
    std::string command;        // run | sweep | validate
    std::string config;         // canonical key = value text
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string started_at;     // ISO 8601 UTC
    std::string finished_at;
    std::vector<std::string> outputs;  // relative to the output directory
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

std::string utc_timestamp();

/// Writes the full output set of a run (CSV, SVG, config, manifest) into
/// `out_dir`. Returns every file written, manifest last.
std::vector<std::filesystem::path> write_run_outputs(const RunResult& run, const SweepConfig& config,
                                                     const std::filesystem::path& out_dir,
                                                     const std::string& started_at);

/// Same for a sweep.
std::vector<std::filesystem::path> write_sweep_outputs(const SweepGrid& grid, const SweepConfig& config,
                                                       const std::filesystem::path& out_dir,
                                                       const std::string& started_at);

inline constexpr std::string_view kToolVersion = "1.0.0";

}  // namespace beliefsim
